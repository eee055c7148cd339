#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "compactknap/lp.hpp"

namespace compactknap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Condensed-tableau dual simplex. Variables 0..n-1 are structural, n..n+m-1
// are (scaled) row activities. Each basic variable equals the dot product of
// its tableau row with the nonbasic values; nothing else is stored.
class DualSimplex {
public:
  DualSimplex(const LinearProgram &lp, const SimplexOptions &opts)
      : n_(lp.numVariables()), m_(static_cast<int>(lp.rows.size())),
        opts_(opts) {
    const int total = n_ + m_;
    lo_.resize(total);
    hi_.resize(total);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.lower[j];
      hi_[j] = lp.upper[j];
      cost_[j] = lp.objective[j];
    }
    tableau_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const LinearRow &row = lp.rows[r];
      double scale = 0.0;
      for (const auto &[var, coef] : row.coefficients) {
        scale = std::max(scale, std::abs(coef));
      }
      scale = scale > 0.0 ? 1.0 / scale : 1.0;
      for (const auto &[var, coef] : row.coefficients) {
        at(r, var) += coef * scale;
      }
      const double rhs = row.rhs * scale;
      lo_[n_ + r] = row.sense == Sense::LessEqual ? -kInf : rhs;
      hi_[n_ + r] = row.sense == Sense::GreaterEqual ? kInf : rhs;
    }

    basic_.resize(m_);
    nonbasic_.resize(n_);
    at_upper_.assign(total, false);
    for (int r = 0; r < m_; ++r) {
      basic_[r] = n_ + r;
    }
    reduced_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      reduced_[j] = cost_[j];
      const bool lo_finite = std::isfinite(lo_[j]);
      const bool hi_finite = std::isfinite(hi_[j]);
      if (cost_[j] > 0.0 || (cost_[j] == 0.0 && lo_finite)) {
        if (!lo_finite) {
          throw std::invalid_argument("dual simplex start needs a finite lower "
                                      "bound on variable " + std::to_string(j + 1));
        }
      } else {
        if (!hi_finite) {
          throw std::invalid_argument("dual simplex start needs a finite upper "
                                      "bound on variable " + std::to_string(j + 1));
        }
        at_upper_[j] = true;
      }
    }
  }

  SolveStatus run(long &iterations) {
    const long cap = opts_.max_iterations > 0
                         ? opts_.max_iterations
                         : 50L * (m_ + n_) + 1000;
    std::vector<double> xn(n_);
    std::vector<double> xb(m_);
    for (iterations = 0;; ++iterations) {
      for (int j = 0; j < n_; ++j) {
        xn[j] = nonbasicValue(nonbasic_[j]);
      }
      int leave = -1;
      double worst = 0.0;
      bool increase = false;
      for (int r = 0; r < m_; ++r) {
        const double *row = &tableau_[static_cast<std::size_t>(r) * n_];
        double v = 0.0;
        for (int j = 0; j < n_; ++j) {
          v += row[j] * xn[j];
        }
        xb[r] = v;
        const int var = basic_[r];
        const double below = lo_[var] - v;
        const double above = v - hi_[var];
        const double tol_lo = opts_.feasibility_tol * std::max(1.0, std::abs(lo_[var]));
        const double tol_hi = opts_.feasibility_tol * std::max(1.0, std::abs(hi_[var]));
        if (below > tol_lo && below > worst) {
          worst = below;
          leave = r;
          increase = true;
        } else if (above > tol_hi && above > worst) {
          worst = above;
          leave = r;
          increase = false;
        }
      }
      if (leave < 0) {
        values_ = xn;
        basic_values_ = xb;
        return SolveStatus::Optimal;
      }
      if (iterations >= cap) {
        return SolveStatus::IterationLimit;
      }
      const int enter = chooseEntering(leave, increase);
      if (enter < 0) {
        return SolveStatus::Infeasible;
      }
      pivot(leave, enter, increase);
    }
  }

  std::vector<double> structuralValues() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) {
      if (nonbasic_[j] < n_) {
        x[nonbasic_[j]] = values_[j];
      }
    }
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] < n_) {
        const int var = basic_[r];
        x[var] = std::clamp(basic_values_[r], lo_[var], hi_[var]);
      }
    }
    return x;
  }

private:
  double &at(int r, int c) { return tableau_[static_cast<std::size_t>(r) * n_ + c]; }

  double nonbasicValue(int var) const { return at_upper_[var] ? hi_[var] : lo_[var]; }

  // Harris two-pass dual ratio test on the leaving row.
  int chooseEntering(int leave, bool increase) const {
    const double *row = &tableau_[static_cast<std::size_t>(leave) * n_];
    constexpr double kDualTol = 1e-12;
    double bound = kInf;
    for (int j = 0; j < n_; ++j) {
      const double alpha = eligible(j, row[j], increase);
      if (alpha != 0.0) {
        bound = std::min(bound, (std::abs(reduced_[j]) + kDualTol) / std::abs(alpha));
      }
    }
    if (!std::isfinite(bound)) {
      return -1;
    }
    int best = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double alpha = eligible(j, row[j], increase);
      if (alpha == 0.0 || std::abs(reduced_[j]) / std::abs(alpha) > bound) {
        continue;
      }
      if (std::abs(alpha) > best_alpha ||
          (std::abs(alpha) == best_alpha && nonbasic_[j] < nonbasic_[best])) {
        best = j;
        best_alpha = std::abs(alpha);
      }
    }
    return best;
  }

  // Returns the tableau entry if column j can move the leaving variable in
  // the required direction, 0 otherwise.
  double eligible(int j, double alpha, bool increase) const {
    const int var = nonbasic_[j];
    if (lo_[var] == hi_[var] || std::abs(alpha) <= opts_.pivot_tol) {
      return 0.0;
    }
    const bool can_increase = !at_upper_[var] && hi_[var] > lo_[var];
    const bool can_decrease = at_upper_[var] || !std::isfinite(lo_[var]);
    const bool moves_up = (alpha > 0.0 && can_increase) || (alpha < 0.0 && can_decrease);
    const bool moves_down = (alpha < 0.0 && can_increase) || (alpha > 0.0 && can_decrease);
    return (increase ? moves_up : moves_down) ? alpha : 0.0;
  }

  void pivot(int p, int q, bool increase) {
    const double a = at(p, q);
    double *prow = &tableau_[static_cast<std::size_t>(p) * n_];
    for (int k = 0; k < n_; ++k) {
      prow[k] = -prow[k] / a;
    }
    prow[q] = 1.0 / a;
    for (int r = 0; r < m_; ++r) {
      if (r == p) {
        continue;
      }
      double *row = &tableau_[static_cast<std::size_t>(r) * n_];
      const double f = row[q];
      if (f == 0.0) {
        continue;
      }
      for (int k = 0; k < n_; ++k) {
        row[k] += f * prow[k];
      }
      row[q] = f * prow[q];
    }
    const double dq = reduced_[q];
    for (int k = 0; k < n_; ++k) {
      reduced_[k] += dq * prow[k];
    }
    reduced_[q] = dq * prow[q];

    const int leaving = basic_[p];
    basic_[p] = nonbasic_[q];
    nonbasic_[q] = leaving;
    at_upper_[basic_[p]] = false;
    at_upper_[leaving] = !increase;
  }

  int n_;
  int m_;
  SimplexOptions opts_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<double> tableau_;
  std::vector<double> reduced_;
  std::vector<int> basic_, nonbasic_;
  std::vector<bool> at_upper_;
  std::vector<double> values_, basic_values_;
};

} // namespace

SolveReport solve_lp(const LinearProgram &lp, const SimplexOptions &opts) {
  const auto start = std::chrono::steady_clock::now();
  lp.validate();
  SolveReport report;
  DualSimplex simplex(lp, opts);
  report.status = simplex.run(report.iterations);
  if (report.status == SolveStatus::Optimal) {
    std::vector<double> x = simplex.structuralValues();
    double obj = 0.0;
    for (int j = 0; j < lp.numVariables(); ++j) {
      obj += lp.objective[j] * x[j];
    }
    report.objective = obj;
    report.bound = obj;
    report.solution.values = std::move(x);
    report.solution.objective = obj;
    report.solution.provenance = "lp";
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace compactknap
