#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "mssp/core/problem.hpp"
#include "mssp/io/json_text.hpp"

namespace mssp {

/// A problem file holds either an MSSP or a tabulated SSP.
using AnyProblem = std::variant<MsspProblem, DiscreteSsp>;

inline const BellmanModel& as_model(const AnyProblem& p) {
  return std::visit([](const auto& m) -> const BellmanModel& { return m; }, p);
}

inline constexpr int kProblemFormatVersion = 1;

/// {"kind": "...", ...parameters}. Custom costs cannot be written.
Json cost_to_json(const CostModel& cost);
/// Errors name the offending JSON pointer, e.g. "/modes/3/0/cost/kind".
CostModel cost_from_json(const Json& record, const std::string& pointer);

/// Document layout:
///   {"format": "mssp-problem", "version": 1, "type": "mssp" | "discrete",
///    "nodes": M, "kappa"?, "labels"?, "coordinates"?,
///    "modes": [[{"successors": [...], "cost": {...}}, ...], ...]      (mssp)
///    "controls": [[{"cost": c, "successors": [...],
///                   "probabilities": [...]}, ...], ...]}               (discrete)
Json problem_to_json(const AnyProblem& problem);
AnyProblem problem_from_json(const Json& doc);

std::string write_problem_text(const AnyProblem& problem);
AnyProblem read_problem_text(std::string_view text);
AnyProblem read_problem_file(const std::string& path);

}  // namespace mssp
