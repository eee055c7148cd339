#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "compactknap/lp.hpp"

namespace compactknap {

namespace {

struct Node {
  double bound = 0.0;
  long id = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node &a, const Node &b) const {
    if (a.bound != b.bound) {
      return a.bound > b.bound;
    }
    return a.id > b.id;
  }
};

// Rounds every fractional value up and keeps the point if it satisfies all
// rows; a cheap incumbent source for covering-type programs.
bool round_up_candidate(const LinearProgram &lp, const std::vector<double> &x,
                        const Node &node, double tol, std::vector<double> &out) {
  out.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = std::round(x[j]);
    double v = std::abs(x[j] - r) <= tol ? r : std::ceil(x[j]);
    v = std::clamp(v, node.lower[j], node.upper[j]);
    out[j] = v;
  }
  return lp.maxViolation(out) <= 1e-9;
}

} // namespace

SolveReport solve_mip(const LinearProgram &lp, const MipLimits &limits) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  lp.validate();
  const int n = lp.numVariables();

  SolveReport report;
  double incumbent = std::numeric_limits<double>::infinity();
  std::vector<double> best;

  const auto objective = [&](const std::vector<double> &x) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) {
      v += lp.objective[j] * x[j];
    }
    return v;
  };
  const auto offer = [&](const std::vector<double> &x) {
    const double v = objective(x);
    if (v < incumbent) {
      incumbent = v;
      best = x;
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{-std::numeric_limits<double>::infinity(), next_id++, lp.lower, lp.upper});

  LinearProgram node_lp = lp;
  std::vector<double> rounded;
  bool stopped = false;
  while (!open.empty()) {
    if (elapsed() > limits.time_limit || report.node_count >= limits.node_limit) {
      stopped = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - limits.prune_tol) {
      continue;
    }
    ++report.node_count;
    node_lp.lower = node.lower;
    node_lp.upper = node.upper;
    const SolveReport relax = solve_lp(node_lp);
    report.iterations += relax.iterations;
    if (relax.status == SolveStatus::Infeasible) {
      continue;
    }
    if (relax.status != SolveStatus::Optimal) {
      report.status = SolveStatus::SolverFailure;
      report.wall_time = elapsed();
      return report;
    }
    if (relax.objective >= incumbent - limits.prune_tol) {
      continue;
    }
    const std::vector<double> &x = relax.solution.values;
    int branch = -1;
    double closest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac <= limits.integrality_tol) {
        continue;
      }
      const double dist = std::abs(x[j] - 0.5);
      if (dist < closest) {
        closest = dist;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<double> xi(x);
      for (double &v : xi) {
        v = std::round(v);
      }
      offer(xi);
      continue;
    }
    if (round_up_candidate(lp, x, node, limits.integrality_tol, rounded)) {
      offer(rounded);
    }
    Node down{relax.objective, next_id++, node.lower, node.upper};
    down.upper[branch] = std::floor(x[branch]);
    Node up{relax.objective, next_id++, std::move(node.lower), std::move(node.upper)};
    up.lower[branch] = std::ceil(x[branch]);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  report.wall_time = elapsed();
  const bool have = !best.empty();
  if (stopped) {
    report.status = SolveStatus::TimeLimit;
    double lb = incumbent;
    if (!open.empty()) {
      lb = std::min(lb, open.top().bound);
    }
    report.bound = lb;
    report.objective = have ? incumbent : std::numeric_limits<double>::quiet_NaN();
  } else if (!have) {
    report.status = SolveStatus::Infeasible;
  } else {
    report.status = SolveStatus::Optimal;
    report.objective = incumbent;
    report.bound = incumbent;
  }
  if (have) {
    report.solution.values = best;
    report.solution.objective = incumbent;
    report.solution.provenance = "mip";
  }
  return report;
}

SolveReport enumerate_exact(const Instance &inst) {
  const auto start = std::chrono::steady_clock::now();
  const int n = inst.n();
  if (n > 24) {
    throw std::invalid_argument("enumerate_exact supports n <= 24");
  }
  SolveReport report;
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  const std::uint32_t count = 1U << n;
  std::vector<int> items;
  items.reserve(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double cost = 0.0;
    double weight = 0.0;
    items.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (1U << i)) {
        cost += inst.costs()[i];
        weight += static_cast<double>(inst.weights()[i]);
        items.push_back(i);
      }
    }
    if (weight < inst.capacity() || cost >= best) {
      continue;
    }
    if (check_selection(inst, Selection(items, n)).feasible()) {
      best = cost;
      best_mask = mask;
    }
    ++report.node_count;
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!std::isfinite(best)) {
    report.status = SolveStatus::Infeasible;
    return report;
  }
  report.status = SolveStatus::Optimal;
  report.objective = best;
  report.bound = best;
  report.solution.values.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (best_mask & (1U << i)) {
      report.solution.values[i] = 1.0;
    }
  }
  report.solution.objective = best;
  report.solution.provenance = "enumeration";
  return report;
}

} // namespace compactknap
