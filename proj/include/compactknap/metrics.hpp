#ifndef COMPACTKNAP_METRICS_HPP
#define COMPACTKNAP_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "compactknap/instance.hpp"
#include "compactknap/solution.hpp"

namespace compactknap {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal such as "0.125".
Rational parse_rational(const std::string &text);
std::string to_string(const Rational &r);

/// Item i selected iff x_i >= 1/2.
Selection round_solution(const SolutionVector &x);

/// c.x / c.1; throws when c.1 = 0. Values are clamped to [0, 1].
double imp(const SolutionVector &x, const Instance &inst);

/// Largest gap j - i - 1 between consecutive selected items, over n; 0 when
/// fewer than two items are selected.
double comp(const Selection &sel, int n);

/// 2 * sqrt(mean of (x_i - round(x_i))^2); values are clamped to [0, 1].
double frac(const SolutionVector &x);

/// 100 (ub - lb) / ub; throws when ub <= 0.
double gap(double ub, double lb);

struct MetricReport {
  double imp = 0.0;
  double comp = 0.0;
  double frac = 0.0;
  /// NaN without an upper bound.
  double gap_percent = 0.0;
  Selection rounded;
};

/// gap_percent uses lb against ub when ub is given.
MetricReport metric_report(const Instance &inst, const SolutionVector &x,
                           std::optional<double> lb = std::nullopt,
                           std::optional<double> ub = std::nullopt);

struct RoadViolation {
  std::string kind; // "knapsack", "compactness" or "box"
  int i = -1;       // 0-based; -1 when not applicable
  int j = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Exact values, filled by the rational checker.
  std::string lhs_exact, rhs_exact;
};

struct RoadReport {
  bool holds = true;
  bool exact = false;
  std::vector<RoadViolation> violations;
};

/**
 * Checks X = x x^T + Diag(x - x^2) against the naive lifted model: knapsack
 * on diag(X) = x, kappa x_i x_j <= sum_{i<k<j} x_k per compactness pair, and
 * x in [0,1]^n, which is all PSD of the bordered matrix needs here.
 */
RoadReport road_check(const Instance &inst, const SolutionVector &x, double tol = 1e-9);
RoadReport road_check(const Instance &inst, const std::vector<Rational> &x);

/// Exact feasibility of x for the linear relaxation and its cost.
struct ExactLpCheck {
  bool feasible = false;
  Rational objective;
  std::vector<std::string> failures;
};

ExactLpCheck check_lp_point_exact(const Instance &inst, const std::vector<Rational> &x);

struct BoundOrder {
  double sdp_lb = 0.0;
  double lp_lb = 0.0;
  double mip_obj = 0.0;
  SolveStatus sdp_status = SolveStatus::SolverFailure;
  SolveStatus lp_status = SolveStatus::SolverFailure;
  SolveStatus mip_status = SolveStatus::SolverFailure;
  bool ordering_holds = false;
};

/// Solves the naive lifted model, the linear relaxation and the MIP.
/// ordering_holds iff sdp <= lp + tol <= mip + 2 tol with all three optimal.
BoundOrder bound_order_check(const Instance &inst, double tol = 1e-5);

} // namespace compactknap

#endif
