#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mssp/core/types.hpp"
#include "mssp/io/json_text.hpp"

namespace mssp {

struct CertificateSummary {
  std::string verdict;
  double delta = 0.0;
  std::size_t certified_modes = 0;
  std::size_t uncertified_modes = 0;
  std::size_t exit_modes = 0;

  bool operator==(const CertificateSummary&) const = default;
};

struct VerificationSummary {
  bool pass = false;
  double max_residual = 0.0;
  std::size_t infinite_inside_reachable = 0;

  bool operator==(const VerificationSummary&) const = default;
};

struct ResultFile {
  std::string method;
  std::vector<double> values;
  std::vector<std::optional<Control>> policy;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  bool converged = true;
  std::optional<double> bucket_width;
  std::size_t late_updates = 0;
  /// Only written on request, so that reruns are byte-identical by default.
  std::optional<double> wall_time_seconds;
  std::optional<CertificateSummary> certificate;
  std::optional<VerificationSummary> verification;
  std::vector<std::string> notes;

  bool operator==(const ResultFile&) const = default;
};

ResultFile result_from_solution(const ValueSolution& solution);

Json result_to_json(const ResultFile& result);
ResultFile result_from_json(const Json& doc);

std::string write_result_text(const ResultFile& result);
ResultFile read_result_text(std::string_view text);

}  // namespace mssp
