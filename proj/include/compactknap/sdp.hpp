#ifndef COMPACTKNAP_SDP_HPP
#define COMPACTKNAP_SDP_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compactknap/conic.hpp"
#include "compactknap/instance.hpp"

namespace compactknap {

/// Penalty weight of the penalized model; finite and nonnegative.
class PenaltyWeight {
public:
  explicit PenaltyWeight(double lambda);
  double value() const { return lambda_; }

private:
  double lambda_;
};

enum class Tier { T1, T2, T3, T4 };

std::string to_string(Tier tier);
/// Parses "T1,T3" style lists; unknown names throw std::invalid_argument.
std::set<Tier> parse_tiers(const std::string &text);
std::set<Tier> all_tiers();

/// Y index of item i (0-based); index 0 is the border row.
inline int lifted(int item) { return item + 1; }

/**
 * @brief The naive lifted relaxation.
 *
 * Objective c . diag(X); knapsack row w . diag(X) >= q; per compactness pair
 * kappa * X_ij <= sum_{i<k<j} X_kk; Y_00 = 1 and Y_0i = X_ii. Rows are tagged
 * "corner", "border", "knapsack" and "compactness".
 */
ConicProgram build_naive(const Instance &inst);

/// Same border and knapsack rows as build_naive, compactness moved into the
/// objective: + lambda * sum_pairs (kappa X_ij - sum_{i<k<j} X_kk).
ConicProgram build_penalized(const Instance &inst, PenaltyWeight lambda);

/// Triple window for T2: triples i < k < j with j - i <= window. nullopt
/// means all triples.
using TripleWindow = std::optional<int>;

/// Default window, 3 * delta.
TripleWindow default_window(const Instance &inst);
/// Parses an integer or "full".
TripleWindow parse_window(const std::string &text);

/**
 * @brief Appends the strengthening rows of the requested tiers.
 *
 * T1: X_ij >= 0, X_ii >= X_ij, X_jj >= X_ij, X_ij >= X_ii + X_jj - 1 for all
 * i < j. T2: for i < k < j inside the window, X_kk + X_ij >= X_ik + X_jk and
 * X_ik + X_jk + X_ij >= X_ii + X_jj + X_kk - 1. T3: for each j,
 * sum_i w_i X_ij >= q X_jj and q (X_jj - 1) + sum_i w_i X_ii >= sum_i w_i X_ij.
 * T4: (sum w_i^2)(sum_{i,j} X_ij) >= sum w_i^2 X_ii + 2 sum_{i<j} w_i w_j X_ij.
 */
void add_strengthening(ConicProgram &prog, const Instance &inst, const std::set<Tier> &tiers,
                       TripleWindow window);

/// The MISC row sum_{i not in S} X_ii >= 1, tagged "misc".
void add_misc_row(ConicProgram &prog, const Selection &subset);

struct IntegralityVerdict {
  bool is_binary = false;
  bool rank_y_one = false;
  /// X = 0: binary and rank(Y) one trivially, but no item chosen.
  bool degenerate = false;
};

/**
 * Reports binarity of X and rank(Y) = 1 separately; neither is inferred from
 * the other. Throws std::invalid_argument when Y has an eigenvalue below
 * -tol * max(1, largest eigenvalue).
 */
IntegralityVerdict verify_lifted_integrality(const LiftedSolution &sol, double tol);

} // namespace compactknap

#endif
