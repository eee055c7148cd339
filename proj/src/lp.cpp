#include "compactknap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace compactknap {

std::string to_string(SolveStatus status) {
  switch (status) {
  case SolveStatus::Optimal:
    return "Optimal";
  case SolveStatus::Infeasible:
    return "Infeasible";
  case SolveStatus::IterationLimit:
    return "IterationLimit";
  case SolveStatus::TimeLimit:
    return "TimeLimit";
  case SolveStatus::SolverFailure:
    return "SolverFailure";
  }
  return "SolverFailure";
}

SolveStatus solve_status_from_string(const std::string &name) {
  for (SolveStatus s :
       {SolveStatus::Optimal, SolveStatus::Infeasible, SolveStatus::IterationLimit,
        SolveStatus::TimeLimit, SolveStatus::SolverFailure}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  throw std::invalid_argument("unknown solve status '" + name + "'");
}

double LinearRow::activity(const std::vector<double> &x) const {
  double a = 0.0;
  for (const auto &[var, coef] : coefficients) {
    a += coef * x[static_cast<std::size_t>(var)];
  }
  return a;
}

double LinearRow::violation(const std::vector<double> &x) const {
  const double a = activity(x);
  switch (sense) {
  case Sense::GreaterEqual:
    return std::max(0.0, rhs - a);
  case Sense::LessEqual:
    return std::max(0.0, a - rhs);
  case Sense::Equal:
    return std::abs(a - rhs);
  }
  return 0.0;
}

void LinearProgram::validate() const {
  const int n = numVariables();
  if (lower.size() != objective.size() || upper.size() != objective.size()) {
    throw std::invalid_argument("bounds must have one entry per variable");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw std::invalid_argument("objective coefficients must be finite");
    }
    if (lower[j] > upper[j]) {
      throw std::invalid_argument("variable " + std::to_string(j + 1) +
                                  " has lower bound above upper bound");
    }
  }
  for (const LinearRow &row : rows) {
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("row right-hand sides must be finite");
    }
    for (const auto &[var, coef] : row.coefficients) {
      if (var < 0 || var >= n || !std::isfinite(coef)) {
        throw std::invalid_argument("row coefficient out of range or not finite");
      }
    }
  }
}

double LinearProgram::maxViolation(const std::vector<double> &x) const {
  double worst = 0.0;
  for (const LinearRow &row : rows) {
    worst = std::max(worst, row.violation(x));
  }
  for (int j = 0; j < numVariables(); ++j) {
    worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
  }
  return worst;
}

LinearProgram build_mkpc(const Instance &inst) {
  const int n = inst.n();
  LinearProgram lp;
  lp.objective = inst.costs();
  lp.lower.assign(static_cast<std::size_t>(n), 0.0);
  lp.upper.assign(static_cast<std::size_t>(n), 1.0);

  LinearRow knapsack;
  knapsack.sense = Sense::GreaterEqual;
  knapsack.rhs = inst.capacity();
  knapsack.tag = "knapsack";
  for (int i = 0; i < n; ++i) {
    knapsack.coefficients.emplace_back(i, static_cast<double>(inst.weights()[i]));
  }
  lp.rows.push_back(std::move(knapsack));

  for (const PairCoefficient &pc : compactness_pairs(n, inst.delta())) {
    LinearRow row;
    row.sense = Sense::LessEqual;
    row.rhs = pc.kappa;
    row.tag = "compactness";
    row.coefficients.emplace_back(pc.i, pc.kappa);
    for (int k = pc.i + 1; k < pc.j; ++k) {
      row.coefficients.emplace_back(k, -1.0);
    }
    row.coefficients.emplace_back(pc.j, pc.kappa);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

} // namespace compactknap
