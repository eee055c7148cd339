#ifndef COMPACTKNAP_LP_HPP
#define COMPACTKNAP_LP_HPP

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compactknap/instance.hpp"
#include "compactknap/solution.hpp"

namespace compactknap {

enum class Sense { GreaterEqual, LessEqual, Equal };

struct LinearRow {
  std::vector<std::pair<int, double>> coefficients;
  Sense sense = Sense::GreaterEqual;
  double rhs = 0.0;
  std::string tag;

  double activity(const std::vector<double> &x) const;
  /// Amount by which x violates the row (0 when satisfied).
  double violation(const std::vector<double> &x) const;
};

struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  int numVariables() const { return static_cast<int>(objective.size()); }
  /// Throws std::invalid_argument on malformed data.
  void validate() const;
  double maxViolation(const std::vector<double> &x) const;
};

/// Variables x_1..x_n in [0,1], the knapsack row, then one compactness row
/// kappa*x_i + kappa*x_j - sum_{i<k<j} x_k <= kappa per pair.
LinearProgram build_mkpc(const Instance &inst);

struct SimplexOptions {
  long max_iterations = 0; // 0 = automatic, 50 * (rows + columns)
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-9;
};

/**
 * @brief Solves an LP with a bounded-variable dual simplex.
 *
 * Works on a condensed tableau whose columns are the nonbasic variables;
 * row activities are explicit bounded variables, so no slack rows are added
 * for the [lo, hi] bounds. The all-slack starting basis is dual feasible when
 * every structural variable with a positive (negative) cost has a finite
 * lower (upper) bound; other programs are rejected with
 * std::invalid_argument.
 */
SolveReport solve_lp(const LinearProgram &lp, const SimplexOptions &opts = {});

struct MipLimits {
  double time_limit = std::numeric_limits<double>::infinity();
  long node_limit = std::numeric_limits<long>::max();
  double integrality_tol = 1e-6;
  double prune_tol = 1e-9;
};

/**
 * @brief Best-first branch and bound over binary-intended variables.
 *
 * Branches on the fractional variable closest to 1/2 (lowest index on ties).
 * On TimeLimit the report carries the incumbent (if any) and the smallest
 * open node bound in SolveReport::bound.
 */
SolveReport solve_mip(const LinearProgram &lp, const MipLimits &limits = {});

/// Exhaustive search over all 2^n selections; throws when n > 24.
SolveReport enumerate_exact(const Instance &inst);

} // namespace compactknap

#endif
