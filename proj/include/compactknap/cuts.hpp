#ifndef COMPACTKNAP_CUTS_HPP
#define COMPACTKNAP_CUTS_HPP

#include <optional>
#include <vector>

#include "compactknap/conic.hpp"
#include "compactknap/instance.hpp"

namespace compactknap {

/// Largest integer weight total that is still below q: q - 1 for integral q,
/// floor(q) otherwise.
Weight separation_budget(double q);

/**
 * Separation knapsack: maximize sum alpha_i d_i subject to
 * sum w_i alpha_i <= budget, alpha binary. Its value in the form used by the
 * cut test is sum (1 - alpha_i) d_i.
 */
struct SeparationProblem {
  std::vector<double> diag_values;
  std::vector<Weight> int_weights;
  Weight budget = 0;
  double capacity = 0.0;

  /// Diagonal entries are clamped to [0, 1].
  static SeparationProblem from(const Instance &inst, const std::vector<double> &diag);
};

/// Continuous relaxation with the relaxed budget q, by the ratio rule.
double separation_lp_check(const SeparationProblem &sp);

struct SeparationDp {
  double opt_value = 0.0;
  Selection alpha_set;
};

/// Exact optimum over an n x (budget + 1) table.
SeparationDp separation_dp(const SeparationProblem &sp);

bool is_insufficient(const Instance &inst, const Selection &s);
/// Insufficient, and any single outside item brings the weight to q.
bool is_maximal_insufficient(const Instance &inst, const Selection &s);

/**
 * Adds the lightest outside item (lowest index on ties) until the weight
 * reaches q, then drops the last one. Throws std::invalid_argument when s is
 * not insufficient or the instance cannot reach q at all.
 */
Selection greedy_maximalize(const Instance &inst, const Selection &s);

/// sum_{i not in subset} X_ii >= 1.
struct MiscCut {
  Selection subset;

  std::vector<int> complement(int n) const;
  double lhs(const std::vector<double> &diag) const;
};

struct SeparationOutcome {
  std::optional<MiscCut> cut;
  double lp_value = 0.0;
  /// Not computed (NaN) when the LP check already certifies.
  double dp_value = 0.0;
};

/// Cuts are only returned when violated by more than this.
inline constexpr double kCutViolationTol = 1e-9;

SeparationOutcome separate_diagonal(const Instance &inst, const std::vector<double> &diag);
SeparationOutcome separation_procedure(const Instance &inst, const LiftedSolution &sol);

/// Result of solving with up to `rounds` separate-and-resolve passes.
struct MiscLoop {
  ConicResult initial;
  ConicResult final;
  std::vector<SeparationOutcome> outcomes;
  std::vector<MiscCut> cuts;
};

MiscLoop solve_with_misc(ConicProgram prog, const Instance &inst, int rounds,
                         const ConicOptions &opts = {});

} // namespace compactknap

#endif
