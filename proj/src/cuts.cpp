#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "compactknap/cuts.hpp"
#include "compactknap/sdp.hpp"

namespace compactknap {

Weight separation_budget(double q) {
  const double fl = std::floor(q);
  return static_cast<Weight>(fl == q ? q - 1.0 : fl);
}

SeparationProblem SeparationProblem::from(const Instance &inst, const std::vector<double> &diag) {
  if (static_cast<int>(diag.size()) != inst.n()) {
    throw std::invalid_argument("diagonal length does not match the instance");
  }
  SeparationProblem sp;
  sp.diag_values.reserve(diag.size());
  for (double d : diag) {
    sp.diag_values.push_back(std::clamp(d, 0.0, 1.0));
  }
  sp.int_weights = inst.weights();
  sp.capacity = inst.capacity();
  sp.budget = separation_budget(inst.capacity());
  return sp;
}

double separation_lp_check(const SeparationProblem &sp) {
  const int n = static_cast<int>(sp.diag_values.size());
  // Zero entries contribute nothing; leaving them out also keeps the
  // cross-multiplied comparison a strict weak order when weights are 0.
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (sp.diag_values[i] > 0.0) {
      order.push_back(i);
    }
  }
  // Ratio d_i / w_i, descending; zero-weight items first.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = sp.diag_values[a], db = sp.diag_values[b];
    const double wa = static_cast<double>(sp.int_weights[a]);
    const double wb = static_cast<double>(sp.int_weights[b]);
    return da * wb > db * wa;
  });
  double total = 0.0;
  for (double d : sp.diag_values) {
    total += d;
  }
  double room = sp.capacity;
  double covered = 0.0;
  for (int i : order) {
    const double d = sp.diag_values[i];
    const double w = static_cast<double>(sp.int_weights[i]);
    if (w <= room) {
      covered += d;
      room -= w;
    } else {
      if (room > 0.0) {
        covered += d * room / w;
      }
      break;
    }
  }
  return std::max(0.0, total - covered);
}

SeparationDp separation_dp(const SeparationProblem &sp) {
  const int n = static_cast<int>(sp.diag_values.size());
  SeparationDp out;
  if (sp.budget < 0) {
    out.opt_value = std::accumulate(sp.diag_values.begin(), sp.diag_values.end(), 0.0);
    return out;
  }
  const auto cap = static_cast<std::size_t>(sp.budget);
  std::vector<double> best(cap + 1, 0.0);
  std::vector<std::vector<bool>> take(static_cast<std::size_t>(n), std::vector<bool>(cap + 1));
  for (int i = 0; i < n; ++i) {
    const double d = sp.diag_values[i];
    const Weight w = sp.int_weights[i];
    if (w < 0 || static_cast<std::size_t>(w) > cap) {
      continue;
    }
    const auto wi = static_cast<std::size_t>(w);
    for (std::size_t c = cap + 1; c-- > wi;) {
      const double cand = best[c - wi] + d;
      if (cand > best[c]) {
        best[c] = cand;
        take[i][c] = true;
      }
    }
  }
  std::vector<int> chosen;
  std::size_t c = cap;
  for (int i = n; i-- > 0;) {
    if (take[i][c]) {
      chosen.push_back(i);
      c -= static_cast<std::size_t>(sp.int_weights[i]);
    }
  }
  out.alpha_set = Selection(chosen, n);
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!out.alpha_set.contains(i)) {
      value += sp.diag_values[i];
    }
  }
  out.opt_value = value;
  return out;
}

namespace {

Weight weight_of(const Instance &inst, const Selection &s) {
  Weight total = 0;
  for (int i : s.items()) {
    total += inst.weights()[i];
  }
  return total;
}

} // namespace

bool is_insufficient(const Instance &inst, const Selection &s) {
  return static_cast<double>(weight_of(inst, s)) < inst.capacity();
}

bool is_maximal_insufficient(const Instance &inst, const Selection &s) {
  const Weight base = weight_of(inst, s);
  if (static_cast<double>(base) >= inst.capacity()) {
    return false;
  }
  for (int j = 0; j < inst.n(); ++j) {
    if (!s.contains(j) && static_cast<double>(base + inst.weights()[j]) < inst.capacity()) {
      return false;
    }
  }
  return true;
}

Selection greedy_maximalize(const Instance &inst, const Selection &s) {
  if (!is_insufficient(inst, s)) {
    throw std::invalid_argument("greedy_maximalize needs an insufficient subset");
  }
  if (static_cast<double>(inst.totalWeight()) < inst.capacity()) {
    throw std::invalid_argument("instance weights cannot reach the capacity");
  }
  std::vector<int> outside;
  for (int i = 0; i < inst.n(); ++i) {
    if (!s.contains(i)) {
      outside.push_back(i);
    }
  }
  std::stable_sort(outside.begin(), outside.end(),
                   [&](int a, int b) { return inst.weights()[a] < inst.weights()[b]; });
  std::vector<int> items = s.items();
  Weight total = weight_of(inst, s);
  for (int i : outside) {
    total += inst.weights()[i];
    if (static_cast<double>(total) >= inst.capacity()) {
      break;
    }
    items.push_back(i);
  }
  return Selection(items, inst.n());
}

std::vector<int> MiscCut::complement(int n) const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!subset.contains(i)) {
      out.push_back(i);
    }
  }
  return out;
}

double MiscCut::lhs(const std::vector<double> &diag) const {
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(diag.size()); ++i) {
    if (!subset.contains(i)) {
      total += diag[i];
    }
  }
  return total;
}

SeparationOutcome separate_diagonal(const Instance &inst, const std::vector<double> &diag) {
  const SeparationProblem sp = SeparationProblem::from(inst, diag);
  SeparationOutcome out;
  out.lp_value = separation_lp_check(sp);
  out.dp_value = std::numeric_limits<double>::quiet_NaN();
  if (out.lp_value >= 1.0) {
    return out;
  }
  const SeparationDp dp = separation_dp(sp);
  out.dp_value = dp.opt_value;
  if (dp.opt_value >= 1.0 - kCutViolationTol) {
    return out;
  }
  MiscCut cut{greedy_maximalize(inst, dp.alpha_set)};
  if (cut.lhs(sp.diag_values) < 1.0 - kCutViolationTol) {
    out.cut = std::move(cut);
  }
  return out;
}

SeparationOutcome separation_procedure(const Instance &inst, const LiftedSolution &sol) {
  std::vector<double> diag(static_cast<std::size_t>(inst.n()));
  for (int i = 0; i < inst.n(); ++i) {
    diag[i] = sol.x(i, i);
  }
  return separate_diagonal(inst, diag);
}

MiscLoop solve_with_misc(ConicProgram prog, const Instance &inst, int rounds,
                         const ConicOptions &opts) {
  if (rounds < 0) {
    throw std::invalid_argument("MISC rounds must be nonnegative");
  }
  MiscLoop loop;
  loop.initial = solve_conic(prog, opts);
  loop.final = loop.initial;
  for (int r = 0; r < rounds; ++r) {
    if (loop.final.report.status != SolveStatus::Optimal) {
      break;
    }
    SeparationOutcome outcome = separation_procedure(inst, loop.final.solution);
    loop.outcomes.push_back(outcome);
    if (!outcome.cut) {
      break;
    }
    add_misc_row(prog, outcome.cut->subset);
    loop.cuts.push_back(*outcome.cut);
    loop.final = solve_conic(prog, opts);
  }
  return loop;
}

} // namespace compactknap
