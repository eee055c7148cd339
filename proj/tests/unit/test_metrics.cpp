#include <doctest.h>

#include <cmath>
#include <random>

#include "compactknap/instgen.hpp"
#include "compactknap/lp.hpp"
#include "compactknap/metrics.hpp"

using namespace compactknap;

namespace {

std::vector<Rational> reference_x5() {
  std::vector<Rational> x;
  for (const char *s : {"1", "3/4", "119/180", "0", "17/135", "251/540", "0", "107/540", "11/15",
                        "11/15"}) {
    x.push_back(parse_rational(s));
  }
  return x;
}

SolutionVector to_vector(const std::vector<Rational> &x) {
  SolutionVector v;
  for (const Rational &r : x) {
    v.values.push_back(static_cast<double>(r));
  }
  return v;
}

} // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("12") == Rational(12));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("07/09") == Rational(7, 9));
  CHECK(parse_rational("0010") == Rational(10));
  CHECK_THROWS(parse_rational("1.2.3"));
  CHECK_THROWS(parse_rational("1e3"));
  CHECK(to_string(Rational(33, 20)) == "33/20");
  CHECK(to_string(Rational(2)) == "2");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("rounding at one half") {
  SolutionVector x;
  x.values = {0.5, 0.4999, 1.0, 0.0, 0.75};
  CHECK(round_solution(x).items() == std::vector<int>{0, 2, 4});
}

TEST_CASE("imp") {
  const Instance inst({1, 1, 1}, {1.0, 2.0, 3.0}, 1.0, 1);
  SolutionVector x;
  x.values = {1.0, 0.0, 1.0};
  CHECK(imp(x, inst) == doctest::Approx(4.0 / 6.0));
  x.values = {1.0, 1.0, 1.0};
  CHECK(imp(x, inst) == 1.0);
  x.values = {1.5, -1.0, 0.0};
  CHECK(imp(x, inst) == doctest::Approx(1.0 / 6.0));
  const Instance free({1}, {0.0}, 1.0, 1);
  CHECK_THROWS(imp(x, free));
}

TEST_CASE("comp") {
  CHECK(comp(Selection({}, 10), 10) == 0.0);
  CHECK(comp(Selection({4}, 10), 10) == 0.0);
  CHECK(comp(Selection({0, 1, 2}, 10), 10) == 0.0);
  CHECK(comp(Selection({0, 3, 9}, 10), 10) == doctest::Approx(5.0 / 10));
  CHECK(comp(Selection({0, 9}, 10), 10) == doctest::Approx(8.0 / 10));
}

TEST_CASE("frac") {
  SolutionVector half;
  half.values.assign(17, 0.5);
  CHECK(frac(half) == 1.0);
  SolutionVector bin;
  bin.values = {0, 1, 1, 0, 1};
  CHECK(frac(bin) == 0.0);
  // High-precision oracle for the reference CE_5 point.
  const std::vector<Rational> x = reference_x5();
  Rational sq = 0;
  for (const Rational &r : x) {
    const Rational d = r < Rational(1, 2) ? r : Rational(1) - r;
    sq += d * d;
  }
  const long double oracle =
      2.0L * std::sqrt(static_cast<long double>(sq) / static_cast<long double>(x.size()));
  CHECK(frac(to_vector(x)) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-15));
}

TEST_CASE("gap") {
  CHECK(gap(6.0, 14.0 / 3.0) == doctest::Approx(200.0 / 9.0).epsilon(1e-14));
  CHECK(gap(3.0, 3.0) == 0.0);
  CHECK_THROWS(gap(0.0, 1.0));
}

TEST_CASE("metric report carries the gap only with an upper bound") {
  const Instance ce = build_ce(2);
  SolutionVector x;
  x.values = {1, 1, 0, 1};
  x.objective = 3.0;
  CHECK(std::isnan(metric_report(ce, x).gap_percent));
  const MetricReport r = metric_report(ce, x, 8.0 / 3.0, 3.0);
  CHECK(r.gap_percent == doctest::Approx(100.0 / 9.0));
  CHECK(r.rounded.items() == std::vector<int>{0, 1, 3});
}

TEST_CASE("reference CE_5 point is LP-feasible with cost 14/3") {
  const ExactLpCheck chk = check_lp_point_exact(build_ce(5), reference_x5());
  CHECK(chk.feasible);
  CHECK(chk.failures.empty());
  CHECK(chk.objective == Rational(14, 3));
  // Perturbing one entry below breaks the knapsack row.
  std::vector<Rational> y = reference_x5();
  y[0] = Rational(99, 100);
  CHECK_FALSE(check_lp_point_exact(build_ce(5), y).feasible);
}

TEST_CASE("road check on the reference point") {
  const RoadReport r = road_check(build_ce(5), reference_x5());
  CHECK(r.exact);
  CHECK_FALSE(r.holds);
  bool found = false;
  for (const RoadViolation &v : r.violations) {
    if (v.kind == "compactness" && v.i == 1 && v.j == 8) {
      found = true;
      CHECK(v.lhs_exact == "33/20");
      CHECK(v.rhs_exact == "29/20");
    }
  }
  CHECK(found);
  // Floating-point checker sees the same pair.
  const RoadReport f = road_check(build_ce(5), to_vector(reference_x5()));
  CHECK_FALSE(f.exact);
  CHECK_FALSE(f.holds);
}

TEST_CASE("road holds at binary feasible points") {
  const Instance ce = build_ce(4);
  SolutionVector x;
  x.values = {1, 0, 0, 0, 0, 0, 0, 1};
  // Infeasible for compactness, so the check must fail.
  CHECK_FALSE(road_check(ce, x).holds);
  x.values = {1, 1, 1, 1, 1, 1, 1, 1};
  CHECK(road_check(ce, x).holds);
}

TEST_CASE("road check against a direct evaluation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = build_ce(2 + t % 5);
    const int n = inst.n();
    std::vector<Rational> x(n);
    SolutionVector xv;
    for (int i = 0; i < n; ++i) {
      x[i] = Rational(static_cast<long long>(ud(rng) * 64), 64);
      xv.values.push_back(static_cast<double>(x[i]));
    }
    bool holds = true;
    Rational w = 0;
    for (int i = 0; i < n; ++i) {
      w += x[i] * inst.weights()[i];
    }
    holds = holds && w >= Rational(static_cast<long long>(inst.capacity()));
    for (const PairCoefficient &pc : compactness_pairs(n, inst.delta())) {
      Rational between = 0;
      for (int k = pc.i + 1; k < pc.j; ++k) {
        between += x[k];
      }
      holds = holds && pc.kappa * x[pc.i] * x[pc.j] <= between;
    }
    CHECK(road_check(inst, x).holds == holds);
    CHECK(road_check(inst, xv).holds == holds);
  }
}

TEST_CASE("metric ranges under fuzzing") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(-0.5, 1.5);
  for (int t = 0; t < 2000; ++t) {
    const Instance inst = build_ce(2 + t % 6);
    SolutionVector x;
    for (int i = 0; i < inst.n(); ++i) {
      x.values.push_back(ud(rng));
    }
    const MetricReport m = metric_report(inst, x);
    CHECK(m.imp >= 0.0);
    CHECK(m.imp <= 1.0);
    CHECK(m.comp >= 0.0);
    CHECK(m.comp < 1.0);
    CHECK(m.frac >= 0.0);
    CHECK(m.frac <= 1.0);
  }
}

TEST_CASE("bound ordering on CE_3") {
  const BoundOrder b = bound_order_check(build_ce(3));
  CHECK(b.ordering_holds);
  CHECK(b.sdp_lb <= b.lp_lb + 1e-5);
  CHECK(b.mip_obj == doctest::Approx(enumerate_exact(build_ce(3)).objective));
}
