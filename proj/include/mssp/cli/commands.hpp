#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mssp/io/problem_file.hpp"

namespace mssp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kInvalidInput = 3,
  kUncertified = 4,
};

/// Where a command gets its problem: a file, a named generator, a grid or a
/// mesh. Exactly one must be set.
struct SourceOptions {
  std::string problem_path;
  /// name[:a,b,...], e.g. "run-race:4,3".
  std::string generate;
  std::string cost = "default";
  double c = 1.0;
  std::size_t eikonal_grid = 0;
  std::string mesh_path;
  std::string stencil = "four";
  double f = 1.0;
  double eccentricity = 1.0;
  double angle = 0.0;
};

/// Throws FormatError on bad files and std::invalid_argument on bad
/// generator specs.
AnyProblem load_source(const SourceOptions& source);

/// Named costs accepted by --cost for a given arity.
CostModel named_cost(const std::string& name, std::size_t arity, double c);

std::vector<std::string> generator_names();

struct SolveOptions {
  std::string method = "auto";
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::optional<double> bucket_width;
  std::uint64_t seed = 7;
  double verify_tol = 1e-8;
  std::string output;
  std::string emit_values;
  bool require_certificate = false;
  bool timing = false;
};

int cmd_generate(const SourceOptions& source, const std::string& output, std::ostream& out,
                 std::ostream& err);
int cmd_solve(const SourceOptions& source, const SolveOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_certify(const SourceOptions& source, std::uint64_t seed, bool json, std::ostream& out,
                std::ostream& err);

struct CompareOptions {
  std::vector<std::string> methods{"vi", "dijkstra"};
  SolveOptions solve;
  double threshold = 1e-8;
};
int cmd_compare(const SourceOptions& source, const CompareOptions& options, std::ostream& out,
                std::ostream& err);

struct OracleOptions {
  double delta = 0.0;
  std::size_t samples = 1000;
  double w_max = 10.0;
  std::uint64_t seed = 7;
  /// Oracle a single named cost of this arity instead of a problem's modes.
  std::string cost;
  std::size_t arity = 2;
};
int cmd_oracle(const SourceOptions& source, const OracleOptions& options, std::ostream& out,
               std::ostream& err);

int cmd_verify(const SourceOptions& source, const std::string& result_path, double tol,
               std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mssp::cli
