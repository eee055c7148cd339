#include <cmath>
#include <sstream>
#include <stdexcept>

#include "compactknap/sdp.hpp"

namespace compactknap {

PenaltyWeight::PenaltyWeight(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("penalty weight must be finite and nonnegative");
  }
}

std::string to_string(Tier tier) {
  switch (tier) {
  case Tier::T1:
    return "T1";
  case Tier::T2:
    return "T2";
  case Tier::T3:
    return "T3";
  case Tier::T4:
    return "T4";
  }
  return "?";
}

std::set<Tier> parse_tiers(const std::string &text) {
  std::set<Tier> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    if (item == "T1") {
      out.insert(Tier::T1);
    } else if (item == "T2") {
      out.insert(Tier::T2);
    } else if (item == "T3") {
      out.insert(Tier::T3);
    } else if (item == "T4") {
      out.insert(Tier::T4);
    } else {
      throw std::invalid_argument("unknown tier: " + item);
    }
  }
  return out;
}

std::set<Tier> all_tiers() { return {Tier::T1, Tier::T2, Tier::T3, Tier::T4}; }

namespace {

ConicProgram lifted_base(const Instance &inst) {
  const int n = inst.n();
  ConicProgram prog;
  prog.order = n + 1;
  prog.objective.assign(static_cast<std::size_t>(svec::dimension(n + 1)), 0.0);
  prog.addRow(LinearForm(n + 1).add(0, 0, 1.0), Sense::Equal, 1.0, "corner");
  for (int i = 0; i < n; ++i) {
    prog.addRow(LinearForm(n + 1).add(0, lifted(i), 1.0).add(lifted(i), lifted(i), -1.0),
                Sense::Equal, 0.0, "border");
  }
  LinearForm knap(n + 1);
  for (int i = 0; i < n; ++i) {
    knap.add(lifted(i), lifted(i), static_cast<double>(inst.weights()[i]));
  }
  prog.addRow(knap, Sense::GreaterEqual, inst.capacity(), "knapsack");
  return prog;
}

void set_objective(ConicProgram &prog, const LinearForm &form) {
  std::fill(prog.objective.begin(), prog.objective.end(), 0.0);
  for (const auto &[idx, coef] : form.encode()) {
    prog.objective[static_cast<std::size_t>(idx)] = coef;
  }
}

LinearForm cost_form(const Instance &inst) {
  LinearForm form(inst.n() + 1);
  for (int i = 0; i < inst.n(); ++i) {
    form.add(lifted(i), lifted(i), inst.costs()[i]);
  }
  return form;
}

} // namespace

ConicProgram build_naive(const Instance &inst) {
  ConicProgram prog = lifted_base(inst);
  set_objective(prog, cost_form(inst));
  const int order = inst.n() + 1;
  for (const PairCoefficient &pc : compactness_pairs(inst.n(), inst.delta())) {
    LinearForm row(order);
    row.add(lifted(pc.i), lifted(pc.j), static_cast<double>(pc.kappa));
    for (int k = pc.i + 1; k < pc.j; ++k) {
      row.add(lifted(k), lifted(k), -1.0);
    }
    prog.addRow(row, Sense::LessEqual, 0.0, "compactness");
  }
  return prog;
}

ConicProgram build_penalized(const Instance &inst, PenaltyWeight lambda) {
  ConicProgram prog = lifted_base(inst);
  LinearForm obj = cost_form(inst);
  const double lam = lambda.value();
  if (lam > 0.0) {
    for (const PairCoefficient &pc : compactness_pairs(inst.n(), inst.delta())) {
      obj.add(lifted(pc.i), lifted(pc.j), lam * pc.kappa);
      for (int k = pc.i + 1; k < pc.j; ++k) {
        obj.add(lifted(k), lifted(k), -lam);
      }
    }
  }
  set_objective(prog, obj);
  return prog;
}

TripleWindow default_window(const Instance &inst) { return 3 * inst.delta(); }

TripleWindow parse_window(const std::string &text) {
  if (text == "full") {
    return std::nullopt;
  }
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != text.size() || text.empty() || value < 2) {
    throw std::invalid_argument("triple window must be an integer >= 2 or \"full\": " + text);
  }
  return value;
}

void add_strengthening(ConicProgram &prog, const Instance &inst, const std::set<Tier> &tiers,
                       TripleWindow window) {
  const int n = inst.n();
  const int order = n + 1;
  if (prog.order != order) {
    throw std::invalid_argument("program order does not match the instance");
  }
  const auto X = [](int i) { return lifted(i); };

  if (tiers.count(Tier::T1)) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        prog.addRow(LinearForm(order).add(X(i), X(j), 1.0), Sense::GreaterEqual, 0.0, "T1");
        prog.addRow(LinearForm(order).add(X(i), X(i), 1.0).add(X(i), X(j), -1.0),
                    Sense::GreaterEqual, 0.0, "T1");
        prog.addRow(LinearForm(order).add(X(j), X(j), 1.0).add(X(i), X(j), -1.0),
                    Sense::GreaterEqual, 0.0, "T1");
        prog.addRow(LinearForm(order)
                        .add(X(i), X(j), 1.0)
                        .add(X(i), X(i), -1.0)
                        .add(X(j), X(j), -1.0),
                    Sense::GreaterEqual, -1.0, "T1");
      }
    }
  }

  if (tiers.count(Tier::T2)) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; ++j) {
        if (window && j - i > *window) {
          break;
        }
        for (int k = i + 1; k < j; ++k) {
          prog.addRow(LinearForm(order)
                          .add(X(k), X(k), 1.0)
                          .add(X(i), X(j), 1.0)
                          .add(X(i), X(k), -1.0)
                          .add(X(j), X(k), -1.0),
                      Sense::GreaterEqual, 0.0, "T2");
          prog.addRow(LinearForm(order)
                          .add(X(i), X(k), 1.0)
                          .add(X(j), X(k), 1.0)
                          .add(X(i), X(j), 1.0)
                          .add(X(i), X(i), -1.0)
                          .add(X(j), X(j), -1.0)
                          .add(X(k), X(k), -1.0),
                      Sense::GreaterEqual, -1.0, "T2");
        }
      }
    }
  }

  if (tiers.count(Tier::T3)) {
    const double q = inst.capacity();
    for (int j = 0; j < n; ++j) {
      LinearForm first(order);
      LinearForm second(order);
      for (int i = 0; i < n; ++i) {
        const double w = static_cast<double>(inst.weights()[i]);
        first.add(X(i), X(j), w);
        second.add(X(i), X(i), w);
        second.add(X(i), X(j), -w);
      }
      first.add(X(j), X(j), -q);
      second.add(X(j), X(j), q);
      prog.addRow(first, Sense::GreaterEqual, 0.0, "T3");
      prog.addRow(second, Sense::GreaterEqual, q, "T3");
    }
  }

  if (tiers.count(Tier::T4)) {
    double w2 = 0.0;
    for (Weight w : inst.weights()) {
      w2 += static_cast<double>(w) * static_cast<double>(w);
    }
    LinearForm row(order);
    for (int i = 0; i < n; ++i) {
      const double wi = static_cast<double>(inst.weights()[i]);
      row.add(X(i), X(i), w2 - wi * wi);
      for (int j = i + 1; j < n; ++j) {
        const double wj = static_cast<double>(inst.weights()[j]);
        row.add(X(i), X(j), 2.0 * (w2 - wi * wj));
      }
    }
    prog.addRow(row, Sense::GreaterEqual, 0.0, "T4");
  }
}

void add_misc_row(ConicProgram &prog, const Selection &subset) {
  const int n = prog.items();
  LinearForm row(prog.order);
  for (int i = 0; i < n; ++i) {
    if (!subset.contains(i)) {
      row.add(lifted(i), lifted(i), 1.0);
    }
  }
  prog.addRow(row, Sense::GreaterEqual, 1.0, "misc");
}

IntegralityVerdict verify_lifted_integrality(const LiftedSolution &sol, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sol.y, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double largest = ev(ev.size() - 1);
  if (ev(0) < -tol * std::max(1.0, largest)) {
    throw std::invalid_argument("lifted matrix is not positive semidefinite");
  }
  IntegralityVerdict v;
  v.is_binary = true;
  bool all_zero = true;
  for (Eigen::Index r = 0; r < sol.x.rows(); ++r) {
    for (Eigen::Index c = 0; c < sol.x.cols(); ++c) {
      const double e = sol.x(r, c);
      if (std::abs(e) > tol && std::abs(e - 1.0) > tol) {
        v.is_binary = false;
      }
      if (std::abs(e) > tol) {
        all_zero = false;
      }
    }
  }
  const double second = ev.size() >= 2 ? ev(ev.size() - 2) : 0.0;
  v.rank_y_one = second <= tol * largest;
  v.degenerate = all_zero;
  return v;
}

} // namespace compactknap
