#ifndef COMPACTKNAP_REPORT_HPP
#define COMPACTKNAP_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "compactknap/bench.hpp"
#include "compactknap/cuts.hpp"
#include "compactknap/metrics.hpp"

namespace compactknap {

/// A point read from a solution file. `exact` is set when every entry was
/// written as an integer or a "p/q" / decimal string.
struct SolutionInput {
  std::vector<double> values;
  std::optional<std::vector<Rational>> exact;
  /// The lifted matrix X when the file carries one.
  std::optional<Eigen::MatrixXd> matrix;
};

/// Accepts a bare array, {"values": [...]}, or a solve report whose
/// "solution" object holds "values" (and optionally "X").
SolutionInput solution_from_json(const nlohmann::json &doc);
SolutionInput read_solution(const std::filesystem::path &path);

/// Solve report: status, objective, bound, wall time, iterations, the
/// solution values, the rounded selection (1-based) and, for conic models,
/// the eigenvalue summary of Y, the integrality verdict, IPM diagnostics,
/// the lifted X and any MISC cuts.
nlohmann::json outcome_json(const Instance &inst, const ModelSpec &spec, const ModelOutcome &out);

nlohmann::json to_json(const MetricReport &m);
nlohmann::json to_json(const RoadReport &r);
/// {"cut": [S, 1-based] | null, "complement": [...] | null, "lp_value", "dp_value"}.
nlohmann::json to_json(const SeparationOutcome &s, int n);

} // namespace compactknap

#endif
