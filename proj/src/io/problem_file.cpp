#include "mssp/io/problem_file.hpp"

#include <stdexcept>

namespace mssp {

namespace {

const Json& field(const Json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object()) throw FormatError(pointer + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(pointer + ": missing field '" + key + "'");
  return *it;
}

std::vector<double> doubles(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw FormatError(pointer + ": expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(number_from_json(v[k], pointer + "/" + std::to_string(k)));
  return out;
}

template <class Int>
Int whole(const Json& v, const std::string& pointer) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw FormatError(pointer + ": expected a nonnegative integer");
  return static_cast<Int>(v.get<unsigned long long>());
}

template <class Int>
std::vector<Int> wholes(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw FormatError(pointer + ": expected an array");
  std::vector<Int> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(whole<Int>(v[k], pointer + "/" + std::to_string(k)));
  return out;
}

Json doubles_to_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_to_json(x));
  return out;
}

}  // namespace

Json cost_to_json(const CostModel& cost) {
  Json out;
  out["kind"] = std::string(to_string(cost.kind()));
  const CostParams& p = cost.params();
  if (const auto* c = std::get_if<LinearCost>(&p)) {
    out["coefficients"] = doubles_to_json(c->coefficients);
  } else if (const auto* c = std::get_if<WeightedEuclideanCost>(&p)) {
    out["scale"] = number_to_json(c->scale);
    out["weights"] = doubles_to_json(c->weights);
  } else if (const auto* c = std::get_if<EuclideanOffsetCost>(&p)) {
    out["scale"] = number_to_json(c->scale);
    out["offset"] = number_to_json(c->offset);
    out["weights"] = doubles_to_json(c->weights);
  } else if (const auto* c = std::get_if<PolynomialCost>(&p)) {
    out["arity"] = c->arity;
    Json terms = Json::array();
    for (const auto& t : c->terms)
      terms.push_back(Json{{"coefficient", number_to_json(t.coefficient)}, {"exponents", t.exponents}});
    out["terms"] = std::move(terms);
    out["concave"] = cost.declared_concave();
  } else if (const auto* c = std::get_if<SemiLagrangianCost>(&p)) {
    out["dimension"] = c->dimension;
    out["edges"] = doubles_to_json(c->edges);
    out["speed"] = number_to_json(c->speed);
    out["metric"] = doubles_to_json(c->metric);
  } else if (const auto* c = std::get_if<HomogenizedCost>(&p)) {
    out["base"] = cost_to_json(*c->base);
  } else if (const auto* c = std::get_if<FacetCost>(&p)) {
    out["base"] = cost_to_json(*c->base);
    out["kept"] = c->kept;
  } else {
    throw std::invalid_argument("custom cost '" + std::get<CustomCost>(p).name +
                                "' has no file representation");
  }
  return out;
}

CostModel cost_from_json(const Json& record, const std::string& pointer) {
  const Json& kind_json = field(record, "kind", pointer);
  if (!kind_json.is_string()) throw FormatError(pointer + "/kind: expected a string");
  const std::string& name = kind_json.get_ref<const std::string&>();
  const auto kind = cost_kind_from_string(name);
  if (!kind || *kind == CostKind::custom)
    throw FormatError(pointer + "/kind: unknown cost kind '" + name + "'");
  auto num = [&](const char* key) {
    return number_from_json(field(record, key, pointer), pointer + "/" + key);
  };
  auto vec = [&](const char* key) {
    return doubles(field(record, key, pointer), pointer + "/" + key);
  };
  try {
    switch (*kind) {
      case CostKind::linear:
        return CostModel::linear(vec("coefficients"));
      case CostKind::weighted_euclidean:
        return CostModel::weighted_euclidean(num("scale"), vec("weights"));
      case CostKind::euclidean_offset:
        return CostModel::euclidean_offset(num("scale"), num("offset"), vec("weights"));
      case CostKind::polynomial: {
        const auto arity = whole<std::size_t>(field(record, "arity", pointer), pointer + "/arity");
        const Json& terms_json = field(record, "terms", pointer);
        if (!terms_json.is_array()) throw FormatError(pointer + "/terms: expected an array");
        std::vector<PolynomialTerm> terms;
        for (std::size_t k = 0; k < terms_json.size(); ++k) {
          const std::string tp = pointer + "/terms/" + std::to_string(k);
          PolynomialTerm t;
          t.coefficient = number_from_json(field(terms_json[k], "coefficient", tp), tp + "/coefficient");
          t.exponents = wholes<int>(field(terms_json[k], "exponents", tp), tp + "/exponents");
          terms.push_back(std::move(t));
        }
        bool concave = false;
        if (auto it = record.find("concave"); it != record.end()) {
          if (!it->is_boolean()) throw FormatError(pointer + "/concave: expected a boolean");
          concave = it->get<bool>();
        }
        return CostModel::polynomial(arity, std::move(terms), concave);
      }
      case CostKind::semi_lagrangian: {
        std::vector<double> metric;
        if (record.contains("metric")) metric = vec("metric");
        return CostModel::semi_lagrangian(
            whole<std::size_t>(field(record, "dimension", pointer), pointer + "/dimension"),
            vec("edges"), num("speed"), std::move(metric));
      }
      case CostKind::homogenized:
        return CostModel::homogenized(cost_from_json(field(record, "base", pointer), pointer + "/base"));
      case CostKind::facet:
        return CostModel::facet(cost_from_json(field(record, "base", pointer), pointer + "/base"),
                                wholes<std::size_t>(field(record, "kept", pointer), pointer + "/kept"));
      case CostKind::custom:
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw FormatError(pointer + ": " + e.what());
  }
  throw FormatError(pointer + "/kind: unknown cost kind '" + name + "'");
}

Json problem_to_json(const AnyProblem& problem) {
  Json doc;
  doc["format"] = "mssp-problem";
  doc["version"] = kProblemFormatVersion;
  const BellmanModel& model = as_model(problem);
  const std::size_t m = model.node_count();
  if (const auto* p = std::get_if<MsspProblem>(&problem)) {
    doc["type"] = "mssp";
    doc["nodes"] = m;
    if (p->kappa()) doc["kappa"] = *p->kappa();
    if (p->has_labels()) {
      Json labels = Json::array();
      for (std::size_t i = 0; i <= m; ++i) labels.push_back(p->label(static_cast<NodeId>(i)));
      doc["labels"] = std::move(labels);
    }
    if (p->has_coordinates()) {
      Json coords = Json::array();
      for (std::size_t i = 0; i < m; ++i)
        coords.push_back(doubles_to_json(p->coordinates(static_cast<NodeId>(i))));
      doc["coordinates"] = std::move(coords);
    }
    Json modes = Json::array();
    for (std::size_t i = 0; i < m; ++i) {
      Json node = Json::array();
      for (const Mode& mode : p->modes(static_cast<NodeId>(i)))
        node.push_back(Json{{"successors", mode.successors}, {"cost", cost_to_json(mode.cost)}});
      modes.push_back(std::move(node));
    }
    doc["modes"] = std::move(modes);
  } else {
    const auto& d = std::get<DiscreteSsp>(problem);
    doc["type"] = "discrete";
    doc["nodes"] = m;
    Json controls = Json::array();
    for (std::size_t i = 0; i < m; ++i) {
      Json node = Json::array();
      for (const DiscreteControl& c : d.controls(static_cast<NodeId>(i)))
        node.push_back(Json{{"cost", number_to_json(c.cost)},
                            {"successors", c.successors},
                            {"probabilities", doubles_to_json(c.probabilities)}});
      controls.push_back(std::move(node));
    }
    doc["controls"] = std::move(controls);
  }
  return doc;
}

AnyProblem problem_from_json(const Json& doc) {
  const Json& format = field(doc, "format", "");
  if (format != "mssp-problem") throw FormatError("/format: expected \"mssp-problem\"");
  const Json& version = field(doc, "version", "");
  if (version != kProblemFormatVersion)
    throw FormatError("/version: unsupported version " + version.dump());
  const auto m = whole<std::size_t>(field(doc, "nodes", ""), "/nodes");
  std::string type = "mssp";
  if (auto it = doc.find("type"); it != doc.end()) {
    if (!it->is_string()) throw FormatError("/type: expected a string");
    type = it->get<std::string>();
  }

  auto node_lists = [&](const char* key) -> const Json& {
    const Json& lists = field(doc, key, "");
    if (!lists.is_array() || lists.size() != m)
      throw FormatError(std::string("/") + key + ": expected one list per node (" +
                        std::to_string(m) + ")");
    return lists;
  };
  auto ids = [&](const Json& v, const std::string& pointer) {
    auto out = wholes<NodeId>(v, pointer);
    for (std::size_t k = 0; k < out.size(); ++k)
      if (out[k] > m)
        throw FormatError(pointer + "/" + std::to_string(k) + ": node id out of range");
    return out;
  };

  if (type == "discrete") {
    DiscreteSsp ssp(m);
    const Json& controls = node_lists("controls");
    for (std::size_t i = 0; i < m; ++i) {
      const std::string np = "/controls/" + std::to_string(i);
      if (!controls[i].is_array()) throw FormatError(np + ": expected an array");
      for (std::size_t g = 0; g < controls[i].size(); ++g) {
        const std::string cp = np + "/" + std::to_string(g);
        DiscreteControl c;
        c.cost = number_from_json(field(controls[i][g], "cost", cp), cp + "/cost");
        c.successors = ids(field(controls[i][g], "successors", cp), cp + "/successors");
        c.probabilities = doubles(field(controls[i][g], "probabilities", cp), cp + "/probabilities");
        try {
          ssp.add_control(static_cast<NodeId>(i), std::move(c));
        } catch (const std::invalid_argument& e) {
          throw FormatError(cp + ": " + e.what());
        }
      }
    }
    return ssp;
  }
  if (type != "mssp") throw FormatError("/type: unknown problem type '" + type + "'");

  MsspProblem problem(m);
  const Json& modes = node_lists("modes");
  for (std::size_t i = 0; i < m; ++i) {
    const std::string np = "/modes/" + std::to_string(i);
    if (!modes[i].is_array()) throw FormatError(np + ": expected an array");
    for (std::size_t g = 0; g < modes[i].size(); ++g) {
      const std::string mp = np + "/" + std::to_string(g);
      auto succ = ids(field(modes[i][g], "successors", mp), mp + "/successors");
      CostModel cost = cost_from_json(field(modes[i][g], "cost", mp), mp + "/cost");
      try {
        problem.add_mode(static_cast<NodeId>(i), std::move(succ), std::move(cost));
      } catch (const std::exception& e) {
        throw FormatError(mp + ": " + e.what());
      }
    }
  }
  if (auto it = doc.find("kappa"); it != doc.end())
    problem.set_kappa(whole<std::size_t>(*it, "/kappa"));
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_array() || it->size() != m + 1)
      throw FormatError("/labels: expected one label per node including the target");
    for (std::size_t i = 0; i <= m; ++i) {
      if (!(*it)[i].is_string()) throw FormatError("/labels/" + std::to_string(i) + ": expected a string");
      problem.set_label(static_cast<NodeId>(i), (*it)[i].get<std::string>());
    }
  }
  if (auto it = doc.find("coordinates"); it != doc.end()) {
    if (!it->is_array() || it->size() != m)
      throw FormatError("/coordinates: expected one point per non-target node");
    for (std::size_t i = 0; i < m; ++i)
      problem.set_coordinates(static_cast<NodeId>(i),
                              doubles((*it)[i], "/coordinates/" + std::to_string(i)));
  }
  return problem;
}

std::string write_problem_text(const AnyProblem& problem) {
  return to_json_text(problem_to_json(problem));
}

AnyProblem read_problem_text(std::string_view text) { return problem_from_json(parse_json_text(text)); }

AnyProblem read_problem_file(const std::string& path) { return read_problem_text(read_text_file(path)); }

}  // namespace mssp
