#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include "compactknap/lp.hpp"
#include "compactknap/metrics.hpp"
#include "compactknap/sdp.hpp"

namespace compactknap {

namespace {

// Plain decimal digits with an optional sign; cpp_int alone would read a
// leading zero as octal.
boost::multiprecision::cpp_int parse_integer(std::string s, const std::string &text) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a rational: " + text);
  }
  const auto first = s.find_first_not_of('0');
  const boost::multiprecision::cpp_int v(first == std::string::npos ? "0" : s.substr(first));
  return negative ? boost::multiprecision::cpp_int(-v) : v;
}

} // namespace

Rational parse_rational(const std::string &text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const auto num = parse_integer(text.substr(0, slash), text);
    const auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in " + text);
    }
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("not a rational: " + text);
    }
    std::string whole = text.substr(0, dot);
    if (whole.empty() || whole == "-" || whole == "+") {
      whole += "0";
    }
    const bool negative = whole.front() == '-';
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) {
      den *= 10;
    }
    const auto w = parse_integer(whole, text);
    const auto f = frac.empty() ? boost::multiprecision::cpp_int(0) : parse_integer(frac, text);
    const Rational magnitude = Rational(negative ? -w : w) + Rational(f, den);
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational &r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

namespace {

double unit(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

Selection round_solution(const SolutionVector &x) {
  std::vector<int> items;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    if (x.values[i] >= 0.5) {
      items.push_back(static_cast<int>(i));
    }
  }
  return Selection(items, static_cast<int>(x.values.size()));
}

double imp(const SolutionVector &x, const Instance &inst) {
  if (static_cast<int>(x.values.size()) != inst.n()) {
    throw std::invalid_argument("solution length does not match the instance");
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    num += inst.costs()[i] * unit(x.values[i]);
    den += inst.costs()[i];
  }
  if (den == 0.0) {
    throw std::invalid_argument("imp is undefined when all costs sum to zero");
  }
  return num / den;
}

double comp(const Selection &sel, int n) {
  if (sel.size() <= 1 || n <= 0) {
    return 0.0;
  }
  int widest = 0;
  for (std::size_t k = 1; k < sel.size(); ++k) {
    widest = std::max(widest, sel.items()[k] - sel.items()[k - 1] - 1);
  }
  return static_cast<double>(widest) / n;
}

double frac(const SolutionVector &x) {
  const std::size_t n = x.values.size();
  if (n == 0) {
    return 0.0;
  }
  double sum = 0.0;
  for (double v : x.values) {
    const double u = unit(v);
    const double d = u - std::floor(u + 0.5);
    sum += d * d;
  }
  return 2.0 * std::sqrt(sum / static_cast<double>(n));
}

double gap(double ub, double lb) {
  if (!(ub > 0.0)) {
    throw std::invalid_argument("gap needs a positive upper bound");
  }
  return 100.0 * (ub - lb) / ub;
}

MetricReport metric_report(const Instance &inst, const SolutionVector &x, std::optional<double> lb,
                           std::optional<double> ub) {
  MetricReport r;
  r.rounded = round_solution(x);
  r.imp = imp(x, inst);
  r.comp = comp(r.rounded, inst.n());
  r.frac = frac(x);
  r.gap_percent = std::numeric_limits<double>::quiet_NaN();
  if (ub && *ub > 0.0) {
    r.gap_percent = gap(*ub, lb.value_or(x.objective));
  }
  return r;
}

namespace {

template <typename T>
RoadReport road_generic(const Instance &inst, const std::vector<T> &x, const T &tol,
                        bool exact) {
  if (static_cast<int>(x.size()) != inst.n()) {
    throw std::invalid_argument("solution length does not match the instance");
  }
  RoadReport report;
  report.exact = exact;
  const auto record = [&](std::string kind, int i, int j, const T &lhs, const T &rhs) {
    RoadViolation v;
    v.kind = std::move(kind);
    v.i = i;
    v.j = j;
    v.lhs = static_cast<double>(lhs);
    v.rhs = static_cast<double>(rhs);
    if constexpr (std::is_same_v<T, Rational>) {
      v.lhs_exact = to_string(lhs);
      v.rhs_exact = to_string(rhs);
    }
    report.violations.push_back(std::move(v));
  };
  for (int i = 0; i < inst.n(); ++i) {
    if (x[i] < T(0) - tol || x[i] > T(1) + tol) {
      record("box", i, i, x[i], x[i] < T(0) ? T(0) : T(1));
    }
  }
  T weight = 0;
  for (int i = 0; i < inst.n(); ++i) {
    weight += T(inst.weights()[i]) * x[i];
  }
  const T q(inst.capacity());
  if (weight < q - tol) {
    record("knapsack", -1, -1, weight, q);
  }
  // Prefix sums for the interior sums.
  std::vector<T> prefix(static_cast<std::size_t>(inst.n()) + 1, T(0));
  for (int i = 0; i < inst.n(); ++i) {
    prefix[i + 1] = prefix[i] + x[i];
  }
  for (const PairCoefficient &pc : compactness_pairs(inst.n(), inst.delta())) {
    const T lhs = T(pc.kappa) * x[pc.i] * x[pc.j];
    const T rhs = prefix[pc.j] - prefix[pc.i + 1];
    if (lhs > rhs + tol) {
      record("compactness", pc.i, pc.j, lhs, rhs);
    }
  }
  report.holds = report.violations.empty();
  return report;
}

} // namespace

RoadReport road_check(const Instance &inst, const SolutionVector &x, double tol) {
  return road_generic<double>(inst, x.values, tol, false);
}

RoadReport road_check(const Instance &inst, const std::vector<Rational> &x) {
  return road_generic<Rational>(inst, x, Rational(0), true);
}

ExactLpCheck check_lp_point_exact(const Instance &inst, const std::vector<Rational> &x) {
  if (static_cast<int>(x.size()) != inst.n()) {
    throw std::invalid_argument("solution length does not match the instance");
  }
  ExactLpCheck out;
  const LinearProgram lp = build_mkpc(inst);
  for (int i = 0; i < inst.n(); ++i) {
    if (x[i] < 0 || x[i] > 1) {
      out.failures.push_back("x_" + std::to_string(i + 1) + " outside [0, 1]");
    }
  }
  for (const LinearRow &row : lp.rows) {
    Rational act = 0;
    for (const auto &[idx, coef] : row.coefficients) {
      act += Rational(coef) * x[idx];
    }
    const Rational rhs(row.rhs);
    bool ok = true;
    switch (row.sense) {
    case Sense::GreaterEqual:
      ok = act >= rhs;
      break;
    case Sense::LessEqual:
      ok = act <= rhs;
      break;
    case Sense::Equal:
      ok = act == rhs;
      break;
    }
    if (!ok) {
      out.failures.push_back(row.tag + " row violated: " + to_string(act) + " vs " +
                             to_string(rhs));
    }
  }
  out.objective = 0;
  for (int i = 0; i < inst.n(); ++i) {
    out.objective += Rational(inst.costs()[i]) * x[i];
  }
  out.feasible = out.failures.empty();
  return out;
}

BoundOrder bound_order_check(const Instance &inst, double tol) {
  BoundOrder out;
  const ConicResult sdp = solve_conic(build_naive(inst));
  out.sdp_status = sdp.report.status;
  out.sdp_lb = sdp.report.bound;
  const LinearProgram lp = build_mkpc(inst);
  const SolveReport lpr = solve_lp(lp);
  out.lp_status = lpr.status;
  out.lp_lb = lpr.objective;
  const SolveReport mip = solve_mip(lp);
  out.mip_status = mip.status;
  out.mip_obj = mip.objective;
  out.ordering_holds = out.sdp_status == SolveStatus::Optimal &&
                       out.lp_status == SolveStatus::Optimal &&
                       out.mip_status == SolveStatus::Optimal && out.sdp_lb <= out.lp_lb + tol &&
                       out.lp_lb + tol <= out.mip_obj + 2.0 * tol;
  return out;
}

} // namespace compactknap
