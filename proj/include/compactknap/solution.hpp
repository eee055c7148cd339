#ifndef COMPACTKNAP_SOLUTION_HPP
#define COMPACTKNAP_SOLUTION_HPP

#include <string>
#include <vector>

namespace compactknap {

/// A point of [0,1]^n together with its objective and the model that
/// produced it.
struct SolutionVector {
  std::vector<double> values;
  double objective = 0.0;
  std::string provenance;
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit, TimeLimit, SolverFailure };

std::string to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string &name);

struct SolveReport {
  SolveStatus status = SolveStatus::SolverFailure;
  double objective = 0.0;
  /// Best proven lower bound (equals objective for exact optimal solves).
  double bound = 0.0;
  SolutionVector solution;
  long node_count = 0;
  long iterations = 0;
  double wall_time = 0.0;
};

} // namespace compactknap

#endif
