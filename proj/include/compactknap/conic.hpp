#ifndef COMPACTKNAP_CONIC_HPP
#define COMPACTKNAP_CONIC_HPP

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "compactknap/lp.hpp"
#include "compactknap/solution.hpp"

namespace compactknap {

/**
 * Scaled symmetric vectorization.
 *
 * A symmetric matrix Y of order p is stored as the vector of its upper
 * triangle, row by row, with off-diagonal entries multiplied by sqrt(2), so
 * that <A, B> = svec(A) . svec(B). Every coefficient that enters a
 * ConicProgram goes through LinearForm, which applies the matching scaling.
 */
namespace svec {

inline constexpr double kSqrt2 = 1.41421356237309504880;

inline int dimension(int order) { return order * (order + 1) / 2; }

inline int index(int i, int j, int order) {
  if (i > j) {
    std::swap(i, j);
  }
  return i * order - i * (i - 1) / 2 + (j - i);
}

/// Inverse of index(): (row, column) with row <= column.
std::pair<int, int> entry(int idx, int order);

Eigen::VectorXd pack(const Eigen::MatrixXd &m);
Eigen::MatrixXd unpack(const Eigen::VectorXd &v, int order);

} // namespace svec

/// Accumulates a linear functional sum coef * Y(i, j) over matrix entries.
class LinearForm {
public:
  explicit LinearForm(int order) : order_(order) {}

  /// Adds coef * Y(i, j); (i, j) and (j, i) denote the same entry.
  LinearForm &add(int i, int j, double coef);

  /// Sparse coefficients over svec indices, sorted, zeros dropped.
  std::vector<std::pair<int, double>> encode() const;

private:
  int order_;
  std::map<int, double> entries_;
};

struct ConicRow {
  std::vector<std::pair<int, double>> coefficients; // svec-scaled
  Sense sense = Sense::GreaterEqual;
  double rhs = 0.0;
  std::string tag;
};

/// minimize objective . svec(Y) over rows, with Y PSD of the given order.
struct ConicProgram {
  int order = 0;
  std::vector<double> objective; // svec-scaled, size svec::dimension(order)
  std::vector<ConicRow> rows;

  int items() const { return order - 1; }
  void addRow(const LinearForm &form, Sense sense, double rhs, std::string tag);
  std::size_t countRows(const std::string &tag) const;
  /// Largest violation of a linear row by the matrix Y.
  double maxRowViolation(const Eigen::MatrixXd &y) const;
  double evaluate(const Eigen::MatrixXd &y) const;
};

/// X with the bordered matrix Y = [[1, diag(X)^T], [diag(X), X]].
struct LiftedSolution {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  SolutionVector diag_x;

  static LiftedSolution fromMatrix(const Eigen::MatrixXd &x, std::string provenance = {});
  /// X = v v^T.
  static LiftedSolution lift(const std::vector<double> &v, std::string provenance = {});
  double minEigenvalue() const;
};

struct ConicOptions {
  double feasibility_tol = 1e-9;
  double gap_tol = 1e-9;
  /// Contract tolerance accepted when the iteration stalls before the
  /// tighter targets above are met.
  double contract_tol = 1e-7;
  /// Stalled runs whose best iterate is within this are still reported
  /// Optimal, with ConicDiagnostics::reduced_accuracy set.
  double acceptable_tol = 1e-5;
  int max_iterations = 150;
  double time_limit = std::numeric_limits<double>::infinity();
  double step_fraction = 0.95;
  /// Per-iteration progress lines on stderr.
  bool verbose = false;
};

struct ConicDiagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  /// gap / (1 + |primal objective| + |dual objective|).
  double relative_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Best iterate missed contract_tol but met acceptable_tol.
  bool reduced_accuracy = false;
};

struct ConicResult {
  LiftedSolution solution;
  SolveReport report;
  ConicDiagnostics diagnostics;
};

/**
 * @brief Primal-dual interior-point method for ConicProgram.
 *
 * Infeasible-start path following with Nesterov-Todd scaling and Mehrotra
 * predictor-corrector steps over the product of the nonnegative orthant (the
 * inequality rows) and the PSD cone of Y. Equality rows are kept as such.
 * Each iteration factors the dense normal matrix of order svec::dimension.
 *
 * The best iterate seen is returned. Its merit is the largest of relative
 * primal residual, dual residual and relative gap; status is Optimal when
 * that merit is within acceptable_tol. report.objective is the primal value
 * at the returned Y and report.bound the dual value.
 */
ConicResult solve_conic(const ConicProgram &prog, const ConicOptions &opts = {});

} // namespace compactknap

#endif
