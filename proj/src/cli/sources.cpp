#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mssp/cli/commands.hpp"
#include "mssp/eikonal/eikonal.hpp"
#include "mssp/problems/examples.hpp"

namespace mssp::cli {

namespace {

struct GeneratorSpec {
  std::string name;
  std::vector<double> args;
};

GeneratorSpec parse_generator(const std::string& spec) {
  GeneratorSpec g;
  const auto colon = spec.find(':');
  g.name = spec.substr(0, colon);
  if (colon == std::string::npos) return g;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument("generator argument '" + item + "' is not a number");
    g.args.push_back(v);
  }
  return g;
}

std::size_t count_arg(const GeneratorSpec& g, std::size_t k, std::size_t fallback) {
  if (k >= g.args.size()) return fallback;
  const double v = g.args[k];
  if (!(v >= 1.0) || v != std::floor(v))
    throw std::invalid_argument(g.name + ": argument " + std::to_string(k + 1) +
                                " must be a positive integer");
  return static_cast<std::size_t>(v);
}

double real_arg(const GeneratorSpec& g, std::size_t k, double fallback) {
  return k < g.args.size() ? g.args[k] : fallback;
}

std::string cost_or(const SourceOptions& s, const char* fallback) {
  return s.cost == "default" ? fallback : s.cost;
}

AnyProblem generate(const SourceOptions& s) {
  const GeneratorSpec g = parse_generator(s.generate);
  const std::string& n = g.name;
  if (n == "symmetric-pair" || n == "fig1") return make_symmetric_pair(s.c).ssp;
  if (n == "fork")
    return make_fork(real_arg(g, 0, 1.0), real_arg(g, 1, 3.0), named_cost(cost_or(s, "euclidean"), 2, s.c));
  if (n == "auxiliary" || n == "aux1") {
    const CostModel cost = named_cost(cost_or(s, "euclidean"), g.args.empty() ? 2 : g.args.size(), s.c);
    std::vector<double> w = g.args;
    if (w.empty()) w = {1.0, 2.0};
    return make_auxiliary(cost, w);
  }
  if (n == "circular" || n == "circular_list") {
    const std::size_t m = count_arg(g, 0, 5);
    std::vector<double> exits(m);
    for (std::size_t i = 0; i < m; ++i) exits[i] = s.c * static_cast<double>(1 + (i * 7) % 5);
    return make_circular_list(m, std::move(exits), named_cost(cost_or(s, "euclidean"), 2, s.c));
  }
  if (n == "heads-run" || n == "rg_game1")
    return make_heads_run_game(count_arg(g, 0, 5), named_cost(cost_or(s, "euclidean"), 2, s.c)).problem;
  if (n == "run-race" || n == "rg_game2")
    return make_run_race_game(count_arg(g, 0, 4), count_arg(g, 1, 3),
                              named_cost(cost_or(s, "euclidean"), 2, s.c));
  if (n == "multitask")
    return make_multitask(count_arg(g, 0, 3), count_arg(g, 1, 2), named_cost(cost_or(s, "linear"), 2, s.c));
  if (n == "distraction" || n == "multitask_distraction")
    return make_multitask_distraction(count_arg(g, 0, 3), count_arg(g, 1, 2),
                                      named_cost(cost_or(s, "linear"), 3, s.c));
  throw std::invalid_argument("unknown generator '" + n + "'");
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"symmetric-pair", "fork", "auxiliary", "circular", "heads-run",
          "run-race", "multitask", "distraction"};
}

CostModel named_cost(const std::string& name, std::size_t arity, double c) {
  if (name == "linear") return CostModel::linear(std::vector<double>(arity, c));
  if (name == "euclidean") return CostModel::euclidean(arity);
  if (name == "concave" || name == "cubic") {
    if (arity != 2) throw std::invalid_argument("cost '" + name + "' has two arguments");
    return name == "concave" ? concave_toll_cost() : cubic_toll_cost();
  }
  throw std::invalid_argument("unknown cost '" + name + "' (linear, euclidean, concave, cubic)");
}

AnyProblem load_source(const SourceOptions& s) {
  const int given = !s.problem_path.empty() + !s.generate.empty() + (s.eikonal_grid > 0) +
                    !s.mesh_path.empty();
  if (given != 1)
    throw std::invalid_argument(
        "give exactly one of a problem file, --generate, --eikonal-grid or --mesh");
  if (!s.problem_path.empty()) return read_problem_file(s.problem_path);
  if (!s.generate.empty()) return generate(s);

  const SpeedModel speed = s.eccentricity == 1.0 ? SpeedModel::constant(s.f)
                                                 : SpeedModel::elliptic(s.f, s.eccentricity, s.angle);
  if (!s.mesh_path.empty()) {
    std::istringstream in(read_text_file(s.mesh_path));
    return build_mesh_mssp(read_mesh(in), speed);
  }
  const auto stencil = stencil_from_string(s.stencil);
  if (!stencil) throw std::invalid_argument("stencil must be 'four' or 'eight'");
  if (s.eikonal_grid < 3) throw std::invalid_argument("--eikonal-grid needs at least 3 nodes per side");
  GridSpec grid;
  grid.nodes_per_side = s.eikonal_grid;
  grid.spacing = 1.0 / static_cast<double>(s.eikonal_grid - 1);
  grid.stencil = *stencil;
  return build_grid_mssp(grid, speed);
}

}  // namespace mssp::cli
