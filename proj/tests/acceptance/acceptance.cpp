// Acceptance run: one PASS/FAIL line per criterion.
// Exit status 1 if any criterion fails, except those listed with --known-red.
#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "compactknap/bench.hpp"
#include "compactknap/csv.hpp"
#include "compactknap/cuts.hpp"
#include "compactknap/instgen.hpp"
#include "compactknap/lp.hpp"
#include "compactknap/metrics.hpp"
#include "compactknap/sdp.hpp"

using namespace compactknap;
namespace fs = std::filesystem;

namespace {

constexpr double kCmpTol = 1e-5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail += " [failed: " + what + "]";
    }
  }
  void note(const char *fmt, ...) __attribute__((format(printf, 2, 3)));
};

void Line::note(const char *fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  detail += " ";
  detail += buf;
}

int failures = 0;
int known_failures = 0;
std::set<int> known_red;

void report(int id, Line line, double secs) {
  const bool known = !line.pass && known_red.count(id) > 0;
  std::printf("criterion %2d: %s%s (%.1f s)%s\n", id, line.pass ? "PASS" : "FAIL",
              line.detail.c_str(), secs, known ? " [known red]" : "");
  std::fflush(stdout);
  if (!line.pass) {
    (known ? known_failures : failures) += 1;
  }
}

void run(int id, const std::function<Line()> &body) {
  const auto t0 = Clock::now();
  Line line;
  try {
    line = body();
  } catch (const std::exception &e) {
    line.pass = false;
    line.detail += std::string(" [exception: ") + e.what() + "]";
  }
  report(id, line, seconds_since(t0));
}

std::vector<Rational> reference_x5() {
  std::vector<Rational> x;
  for (const char *s : {"1", "3/4", "119/180", "0", "17/135", "251/540", "0", "107/540", "11/15",
                        "11/15"}) {
    x.push_back(parse_rational(s));
  }
  return x;
}

Rational exact_cost(const Instance &inst, const std::vector<double> &x) {
  Rational c = 0;
  for (int i = 0; i < inst.n(); ++i) {
    if (x[i] > 0.5) {
      c += Rational(inst.costs()[i]);
    }
  }
  return c;
}

// Relaxation bounds shared by criteria 5 and 6.
struct Bounds {
  std::string id;
  SolveReport lp, mip, sdp, sdp_plus;
};

std::vector<Bounds> generated_bounds() {
  static std::vector<Bounds> cache;
  if (!cache.empty()) {
    return cache;
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int n = 20 + 10 * static_cast<int>((seed - 1) % 3); // 20, 30, 40
    const Instance inst = generate_instance(n, seed);
    Bounds b;
    b.id = "gen-n" + std::to_string(n) + "-s" + std::to_string(seed);
    const LinearProgram lp = build_mkpc(inst);
    b.lp = solve_lp(lp);
    b.mip = solve_mip(lp);
    b.sdp = solve_conic(build_naive(inst)).report;
    ConicProgram plus = build_naive(inst);
    add_strengthening(plus, inst, all_tiers(), default_window(inst));
    b.sdp_plus = solve_conic(plus).report;
    cache.push_back(std::move(b));
  }
  return cache;
}

bool all_optimal(const Bounds &b) {
  return b.lp.status == SolveStatus::Optimal && b.mip.status == SolveStatus::Optimal &&
         b.sdp.status == SolveStatus::Optimal && b.sdp_plus.status == SolveStatus::Optimal;
}

// min over insufficient S of sum_{i not in S} d_i, by Gray-code enumeration.
double exhaustive_separation(const Instance &inst, const std::vector<double> &d) {
  const int n = inst.n();
  double total = 0.0;
  for (double v : d) {
    total += v;
  }
  double best = total; // the empty set is insufficient when q > 0
  Weight w = 0;
  double inside = 0.0;
  std::uint32_t gray = 0;
  for (std::uint32_t k = 1; k < (1u << n); ++k) {
    const int bit = __builtin_ctz(k);
    gray ^= 1u << bit;
    const bool added = gray >> bit & 1u;
    w += added ? inst.weights()[bit] : -inst.weights()[bit];
    inside += added ? d[bit] : -d[bit];
    if (static_cast<double>(w) < inst.capacity()) {
      best = std::min(best, total - inside);
    }
  }
  return best;
}

std::vector<std::vector<std::string>> untimed_rows(const fs::path &csv_path) {
  csv::Table t = csv::read(csv_path);
  const std::size_t col = t.column("wall_time");
  for (auto &row : t.rows) {
    row.erase(row.begin() + static_cast<long>(col));
  }
  return t.rows;
}

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h = (h ^ c) * 1099511628211ULL;
  }
  return h;
}

double mean(const std::vector<double> &v) {
  return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

} // namespace

int main(int argc, char **argv) {
  fs::path work = fs::temp_directory_path() / "compactknap-acceptance";
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--known-red" && a + 1 < argc) {
      std::stringstream ids(argv[++a]);
      for (std::string tok; std::getline(ids, tok, ',');) {
        known_red.insert(std::stoi(tok));
      }
    } else {
      work = arg;
    }
  }
  fs::create_directories(work);

  run(1, [] {
    Line l;
    const auto t0 = Clock::now();
    const SolveReport r = solve_lp(build_mkpc(build_ce(5)));
    const ExactLpCheck chk = check_lp_point_exact(build_ce(5), reference_x5());
    const double t = seconds_since(t0);
    l.note("lp=%.9f", r.objective);
    l.note("x5_feasible=%d x5_cost=%s", chk.feasible ? 1 : 0, to_string(chk.objective).c_str());
    l.require(r.status == SolveStatus::Optimal, "lp status");
    l.require(std::abs(r.objective - 14.0 / 3.0) <= 1e-6, "lp value 14/3 within 1e-6");
    l.require(chk.feasible && chk.objective == Rational(14, 3), "reference point exact");
    l.require(t < 1.0, "runtime < 1 s");
    return l;
  });

  run(2, [] {
    Line l;
    const auto t0 = Clock::now();
    const ConicResult r = solve_conic(build_naive(build_ce(5)));
    const double t = seconds_since(t0);
    l.note("sdp=%.6f status=%s", r.report.bound, to_string(r.report.status).c_str());
    l.require(r.report.status == SolveStatus::Optimal, "status");
    l.require(std::abs(r.report.bound - 4.42) <= 0.05, "within 0.05 of 4.42");
    l.require(t < 30.0, "runtime < 30 s");
    return l;
  });

  run(3, [] {
    Line l;
    const auto t0 = Clock::now();
    const RoadReport r = road_check(build_ce(5), reference_x5());
    const double t = seconds_since(t0);
    bool found = false;
    for (const RoadViolation &v : r.violations) {
      if (v.kind == "compactness" && v.i == 1 && v.j == 8) {
        found = v.lhs_exact == "33/20" && v.rhs_exact == "29/20";
        l.note("pair=(2,9) lhs=%s rhs=%s", v.lhs_exact.c_str(), v.rhs_exact.c_str());
      }
    }
    l.require(r.exact, "exact arithmetic");
    l.require(found, "pair (2,9) with 33/20 > 29/20");
    l.require(t < 1.0, "runtime < 1 s");
    return l;
  });

  run(4, [] {
    Line l;
    for (int m : {2, 5}) {
      const Instance ce = build_ce(m);
      const SolveReport b = solve_mip(build_mkpc(ce));
      const SolveReport e = enumerate_exact(ce);
      const Rational cb = exact_cost(ce, b.solution.values);
      const Rational ce_ = exact_cost(ce, e.solution.values);
      const Rational want = m == 2 ? 3 : 6;
      l.note("CE_%d mip=%s enum=%s", m, to_string(cb).c_str(), to_string(ce_).c_str());
      l.require(b.status == SolveStatus::Optimal && e.status == SolveStatus::Optimal, "status");
      l.require(cb == want && ce_ == want, "exact optimum");
    }
    const double g = gap(6.0, 14.0 / 3.0);
    l.note("gap=%.12f", g);
    l.require(std::abs(g - 200.0 / 9.0) <= 1e-9, "gap 200/9");
    return l;
  });

  const auto t5 = Clock::now();
  run(5, [&] {
    Line l;
    int ce_ok = 0;
    bool strict5 = false;
    for (int m = 2; m <= 20; ++m) {
      const BoundOrder b = bound_order_check(build_ce(m), kCmpTol);
      ce_ok += b.ordering_holds ? 1 : 0;
      if (!b.ordering_holds) {
        l.note("CE_%d sdp=%.6f lp=%.6f mip=%.6f", m, b.sdp_lb, b.lp_lb, b.mip_obj);
      }
      if (m == 5) {
        strict5 = b.sdp_lb < b.lp_lb - kCmpTol;
        l.note("CE_5 sdp=%.6f < lp=%.6f", b.sdp_lb, b.lp_lb);
      }
    }
    l.note("CE ordering %d/19", ce_ok);
    l.require(ce_ok == 19, "ordering on every CE_m");
    l.require(strict5, "strict sdp < lp at m=5");
    int held = 0;
    int optimal = 0;
    for (const Bounds &b : generated_bounds()) {
      if (!all_optimal(b)) {
        continue;
      }
      ++optimal;
      held += (b.sdp.bound <= b.lp.objective + kCmpTol &&
               b.lp.objective + kCmpTol <= b.mip.objective + 2 * kCmpTol)
                  ? 1
                  : 0;
    }
    l.note("generated (reported): ordering held on %d/%d solved of 100", held, optimal);
    l.require(seconds_since(t5) < 1800.0, "runtime < 30 min");
    return l;
  });

  run(6, [] {
    Line l;
    int dominates = 0;
    int closed = 0;
    int optimal = 0;
    for (const Bounds &b : generated_bounds()) {
      if (!all_optimal(b)) {
        l.note("%s not solved", b.id.c_str());
        continue;
      }
      ++optimal;
      const double lb = b.sdp_plus.bound;
      const bool ok = lb >= b.sdp.bound - kCmpTol && lb >= b.lp.objective - kCmpTol;
      dominates += ok ? 1 : 0;
      if (!ok) {
        l.note("%s sdp+=%.6f sdp=%.6f lp=%.6f", b.id.c_str(), lb, b.sdp.bound, b.lp.objective);
      }
      closed += gap(b.mip.objective, lb) <= 100.0 * kCmpTol ? 1 : 0;
    }
    l.note("dominance %d/%d, closed to gap 0: %d", dominates, optimal, closed);
    l.require(optimal == 100, "all 100 instances solved");
    l.require(dominates == optimal, "dominance on every instance");
    l.require(closed >= 1, "at least one instance closed");
    return l;
  });

  run(7, [] {
    Line l;
    int match = 0;
    for (int k = 0; k < 50; ++k) {
      const int n = 8 + k % 9; // 8..16
      const Instance inst = generate_instance(n, 1000 + k);
      const SolveReport b = solve_mip(build_mkpc(inst));
      const SolveReport e = enumerate_exact(inst);
      const bool ok = b.status == SolveStatus::Optimal && e.status == SolveStatus::Optimal &&
                      exact_cost(inst, b.solution.values) == exact_cost(inst, e.solution.values);
      match += ok ? 1 : 0;
    }
    l.note("exact matches %d/50", match);
    l.require(match == 50, "all 50 match");
    return l;
  });

  run(8, [] {
    Line l;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> dyadic(0, 1024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int cuts = 0, none_dp = 0, none_lp = 0;
    int bad_a = 0, bad_b = 0, bad_c = 0, bad_d = 0;
    for (int t = 0; t < 1000; ++t) {
      const int n = 4 + t % 15; // 4..18
      const Instance inst = generate_instance(n, 5000 + t);
      // Multiples of 1/1024: every partial sum is exact in double.
      std::vector<double> d(n);
      const double scale = 0.25 + 0.75 * u(rng);
      const double zeros = 0.5 * u(rng);
      for (double &v : d) {
        v = u(rng) < zeros ? 0.0 : std::min(1024, static_cast<int>(dyadic(rng) / scale)) / 1024.0;
      }
      const SeparationOutcome s = separate_diagonal(inst, d);
      const double oracle = exhaustive_separation(inst, d);
      if (s.cut) {
        ++cuts;
        bad_a += (is_insufficient(inst, s.cut->subset) &&
                  is_maximal_insufficient(inst, s.cut->subset))
                     ? 0
                     : 1;
        bad_b += s.cut->lhs(d) <= 1.0 - 1e-9 ? 0 : 1;
      } else if (!std::isnan(s.dp_value)) {
        ++none_dp;
        bad_c += oracle >= 1.0 - kCutViolationTol ? 0 : 1;
      } else {
        ++none_lp;
        bad_c += oracle >= 1.0 ? 0 : 1;
      }
      if (!std::isnan(s.dp_value)) {
        bad_d += s.dp_value == oracle ? 0 : 1;
      }
    }
    l.note("cuts=%d none_dp=%d none_lp=%d bad(a,b,c,d)=(%d,%d,%d,%d)", cuts, none_dp, none_lp,
           bad_a, bad_b, bad_c, bad_d);
    l.require(bad_a == 0, "(a) maximal insufficient");
    l.require(bad_b == 0, "(b) violated by 1e-9");
    l.require(bad_c == 0, "(c) no-cut confirmed");
    l.require(bad_d == 0, "(d) dp equals brute force");
    l.require(cuts > 0 && none_dp > 0, "both outcomes exercised");
    return l;
  });

  run(9, [] {
    Line l;
    bool ident = true;
    for (int n = 1; n <= 200; ++n) {
      SolutionVector half, bin;
      half.values.assign(n, 0.5);
      for (int i = 0; i < n; ++i) {
        bin.values.push_back((i * 7 + n) % 3 == 0 ? 1.0 : 0.0);
      }
      ident = ident && frac(half) == 1.0 && frac(bin) == 0.0;
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int out_of_range = 0;
    for (int t = 0; t < 10000; ++t) {
      const int n = 2 + t % 40;
      std::vector<Weight> w(n, 1);
      std::vector<double> c(n);
      SolutionVector x;
      for (int i = 0; i < n; ++i) {
        c[i] = 0.01 + 5.0 * u(rng);
        const double r = u(rng);
        x.values.push_back(r < 0.1 ? 0.0 : r > 0.9 ? 1.0 : u(rng));
      }
      const Instance inst(w, c, 1.0, 1 + t % 4);
      const MetricReport m = metric_report(inst, x);
      const auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
      out_of_range += (in01(m.imp) && in01(m.comp) && in01(m.frac)) ? 0 : 1;
    }
    l.note("identities=%d out_of_range=%d/10000", ident ? 1 : 0, out_of_range);
    l.require(ident, "frac identities exact");
    l.require(out_of_range == 0, "ranges");
    return l;
  });

  run(10, [&] {
    Line l;
    const std::vector<double> lambdas = {1.0, 1e-1, 1e-2, 1e-4, 1e-6};
    nlohmann::json pen = {{"kind", "pen+"}, {"lambdas", lambdas}, {"misc_rounds", 1}};
    const nlohmann::json doc = {
        {"instances", {{"generate", {{"count", 20}, {"n", 60}, {"seed_base", 1}}}}},
        {"models", {{{"kind", "sdp+"}}, pen}},
        {"time_limit", 600},
        {"output_dir", (work / "tradeoff").string()},
        {"workers", 1}};
    const BenchResult res = run_benchmark(bench_config_from_json(doc));
    std::map<std::string, std::vector<double>> comp, imp, frac_v;
    int failed = 0;
    for (const RunRecord &r : res.records) {
      if (r.status != "Optimal") {
        ++failed;
        continue;
      }
      comp[r.model].push_back(r.comp);
      imp[r.model].push_back(r.imp);
      frac_v[r.model].push_back(r.frac);
    }
    const auto id = [](double lam) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "pen+@%g", lam);
      return std::string(buf);
    };
    const double comp_hi = mean(comp[id(1e-1)]), comp_lo = mean(comp[id(1e-6)]);
    const double imp_hi = mean(imp[id(1e-1)]), imp_lo = mean(imp[id(1e-6)]);
    const double frac_pen = mean(frac_v[id(1.0)]), frac_sdp = mean(frac_v["sdp+"]);
    l.note("records=%zu non_optimal=%d", res.records.size(), failed);
    l.note("comp(1e-1)=%.4f comp(1e-6)=%.4f imp(1e-1)=%.4f imp(1e-6)=%.4f", comp_hi, comp_lo,
           imp_hi, imp_lo);
    l.note("frac pen+@1=%.4f sdp+=%.4f", frac_pen, frac_sdp);
    l.require(comp_hi <= comp_lo, "comp trend");
    l.require(imp_hi >= imp_lo, "imp trend");
    l.require(frac_pen < frac_sdp, "frac pen+@1 < sdp+");
    // Paired: an instance counts only when both the plain and the cut run are Optimal.
    std::map<std::pair<std::string, std::string>, double> by_run;
    for (const RunRecord &r : res.records) {
      if (r.status == "Optimal") {
        by_run[{r.instance_id, r.model}] = r.frac;
      }
    }
    for (double lam : {1.0, 1e-2, 1e-4, 1e-6}) {
      std::vector<double> base_v, after_v;
      for (const auto &[key, f] : by_run) {
        if (key.second != id(lam)) {
          continue;
        }
        const auto cut = by_run.find({key.first, id(lam) + ":misc"});
        if (cut != by_run.end()) {
          base_v.push_back(f);
          after_v.push_back(cut->second);
        }
      }
      const double base = mean(base_v);
      const double after = mean(after_v);
      const double factor = after > 0.0 ? base / after : std::numeric_limits<double>::infinity();
      l.note("misc@%g n=%zu %.3g->%.3g x%.3g", lam, base_v.size(), base, after, factor);
      l.require(factor >= 10.0, "misc reduction >= 10 at " + id(lam));
    }
    return l;
  });

  run(11, [] {
    Line l;
    const Instance ce5 = build_ce(5);
    const SolveReport lp5 = solve_lp(build_mkpc(ce5));
    SolutionVector x5 = lp5.solution;
    const bool solver5 = !road_check(ce5, x5).holds;
    const bool reference5 = !road_check(ce5, reference_x5()).holds;
    int flagged = 0;
    for (int m = 2; m <= 50; ++m) {
      const Instance ce = build_ce(m);
      const SolveReport r = solve_lp(build_mkpc(ce));
      flagged += (r.status == SolveStatus::Optimal && !road_check(ce, r.solution).holds) ? 1 : 0;
    }
    l.note("m=5 solver_optimum_flagged=%d reference_flagged=%d", solver5 ? 1 : 0,
           reference5 ? 1 : 0);
    l.note("violation rate over 2..50 (reported): %d/49", flagged);
    l.require(solver5 || reference5, "m=5 violation");
    return l;
  });

  run(12, [&] {
    Line l;
    bool same = true;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      same = same && serialize(generate_instance(40, seed)) == serialize(generate_instance(40, seed));
    }
    const std::uint64_t h = fnv1a(serialize(generate_instance(40, 1)));
    l.note("hash(n40,s1)=%016llx", static_cast<unsigned long long>(h));
    l.require(same, "generator byte-identical");
    const auto bench_once = [&](const std::string &name) {
      const nlohmann::json doc = {
          {"instances", {{"generate", {{"count", 3}, {"n", 14}, {"seed_base", 3}}},
                         {"ce", {{"m_min", 2}, {"m_max", 4}}}}},
          {"models",
           {{{"kind", "mip"}},
            {{"kind", "lp"}},
            {{"kind", "sdp"}},
            {{"kind", "sdp+"}, {"misc_rounds", 1}},
            {{"kind", "pen+"}, {"lambdas", {1e-2}}, {"misc_rounds", 1}}}},
          {"time_limit", 120},
          {"output_dir", (work / name).string()},
          {"workers", 1}};
      fs::remove_all(work / name);
      return run_benchmark(bench_config_from_json(doc)).csv_path;
    };
    const auto a = untimed_rows(bench_once("det-a"));
    const auto b = untimed_rows(bench_once("det-b"));
    l.note("rows=%zu", a.size());
    l.require(!a.empty() && a == b, "identical CSVs modulo wall_time");
    return l;
  });

  std::printf("%d criteria failed, %d of them known red\n", failures + known_failures,
              known_failures);
  return failures == 0 ? 0 : 1;
}
