#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "compactknap/bench.hpp"
#include "compactknap/csv.hpp"
#include "compactknap/emit.hpp"
#include "compactknap/instgen.hpp"
#include "compactknap/report.hpp"

namespace compactknap::cli {

namespace {

// Input problems the user can fix; reported with exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_json(const nlohmann::json &doc, const std::string &out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) {
    throw UsageError("cannot write " + out);
  }
  f << doc.dump(2) << '\n';
}

Instance load_instance(const std::string &path) {
  try {
    return read_instance(path);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
}

SolutionInput load_solution(const std::string &path, int n) {
  SolutionInput s;
  try {
    s = read_solution(path);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  if (static_cast<int>(s.values.size()) != n) {
    throw UsageError("solution has " + std::to_string(s.values.size()) + " entries, instance has " +
                     std::to_string(n));
  }
  return s;
}

int exit_for(SolveStatus status, bool has_solution) {
  switch (status) {
  case SolveStatus::Optimal:
    return kOk;
  case SolveStatus::TimeLimit:
  case SolveStatus::IterationLimit:
    return has_solution ? kPartial : kSolverFailure;
  default:
    return kSolverFailure;
  }
}

} // namespace

int run(int argc, char **argv) {
  CLI::App app{"Min-knapsack with compactness constraints: models, relaxations, cuts, benchmarks"};
  app.require_subcommand(1);

  // generate
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto *generate = app.add_subcommand("generate", "Generate a two-peak instance");
  generate->add_option("--n", gen_n, "Number of items")->required()->check(CLI::Range(4, 1 << 20));
  generate->add_option("--seed", gen_seed, "Seed")->required();
  generate->add_option("--out", gen_out, "Output path (stdout when omitted)");

  // generate-ce
  int ce_m = 0;
  std::string ce_out;
  auto *generate_ce = app.add_subcommand("generate-ce", "Build the counterexample instance CE_m");
  generate_ce->add_option("--m", ce_m, "Half the number of items")->required()->check(
      CLI::Range(2, 1 << 20));
  generate_ce->add_option("--out", ce_out, "Output path (stdout when omitted)");

  // solve
  std::string model_name;
  std::string solve_instance;
  double time_limit = std::numeric_limits<double>::infinity();
  double lambda = kDefaultLambda;
  std::string tiers_text = "T1,T2,T3,T4";
  std::string window_text;
  int misc_rounds = 0;
  std::string solve_out;
  bool verbose = false;
  auto *solve = app.add_subcommand("solve", "Solve one model on one instance");
  solve->add_option("--model", model_name, "lp, mip, sdp, sdp+, pen or pen+")
      ->required()
      ->check(CLI::IsMember({"lp", "mip", "sdp", "sdp+", "pen", "pen+"}));
  solve->add_option("--instance", solve_instance, "Instance JSON")->required();
  solve->add_option("--time-limit", time_limit, "Seconds per solve")->check(CLI::PositiveNumber);
  solve->add_option("--lambda", lambda, "Penalty weight for pen and pen+")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--tiers", tiers_text, "Strengthening tiers for sdp+ and pen+");
  solve->add_option("--triple-window", window_text, "T2 window: integer >= 2 or full");
  solve->add_option("--misc-rounds", misc_rounds, "Separate-and-resolve rounds (conic models)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--out", solve_out, "Report path (stdout when omitted)");
  solve->add_flag("--verbose", verbose, "Interior-point progress on stderr");

  // separate
  std::string sep_instance, sep_solution;
  auto *separate = app.add_subcommand("separate", "Look for a violated MISC cut");
  separate->add_option("--instance", sep_instance, "Instance JSON")->required();
  separate->add_option("--solution", sep_solution, "Solution JSON")->required();

  // metrics
  std::string met_instance, met_solution;
  std::optional<double> met_ub;
  auto *metrics = app.add_subcommand("metrics", "imp, comp, frac and gap of a solution");
  metrics->add_option("--instance", met_instance, "Instance JSON")->required();
  metrics->add_option("--solution", met_solution, "Solution JSON")->required();
  metrics->add_option("--ub", met_ub, "Upper bound for the gap");

  // road
  std::string road_instance, road_solution;
  auto *road = app.add_subcommand("road", "Check the ROAD property of a relaxed solution");
  road->add_option("--instance", road_instance, "Instance JSON")->required();
  road->add_option("--solution", road_solution, "Solution JSON")->required();

  // bench
  std::string bench_config;
  std::string bench_out;
  std::optional<int> bench_workers;
  bool bench_quiet = false;
  auto *bench = app.add_subcommand("bench", "Run a benchmark described by a JSON config");
  bench->add_option("--config", bench_config, "BenchConfig JSON")->required();
  bench->add_option("--out", bench_out, "Override the output directory");
  bench->add_option("--workers", bench_workers, "Override the worker count")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--quiet", bench_quiet, "No progress lines");

  // plot
  std::string plot_in, plot_out;
  auto *plot = app.add_subcommand(
      "plot", "Render an emitted CSV to SVG, or emit every table from a runs.csv");
  plot->add_option("--input", plot_in, "CSV file")->required();
  plot->add_option("--out", plot_out, "SVG path, or output directory for runs.csv input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) {
      const Instance inst = generate_instance(gen_n, gen_seed);
      if (gen_out.empty()) {
        std::cout << serialize(inst) << '\n';
      } else {
        write_instance(inst, gen_out);
      }
      return kOk;
    }
    if (generate_ce->parsed()) {
      const Instance inst = build_ce(ce_m);
      if (ce_out.empty()) {
        std::cout << serialize(inst) << '\n';
      } else {
        write_instance(inst, ce_out);
      }
      return kOk;
    }
    if (solve->parsed()) {
      const Instance inst = load_instance(solve_instance);
      ModelSpec spec;
      try {
        spec.kind = parse_model_kind(model_name);
        spec.lambda = PenaltyWeight(lambda).value();
        spec.tiers = parse_tiers(tiers_text);
        if (!window_text.empty()) {
          spec.window = parse_window(window_text);
        }
      } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
      }
      spec.id = to_string(spec.kind);
      spec.misc_rounds = misc_rounds;
      if (misc_rounds > 0 && !is_conic(spec.kind)) {
        throw UsageError("--misc-rounds needs a conic model");
      }
      if (verbose && is_conic(spec.kind)) {
        // run_model has no verbose switch; solve directly.
        ConicOptions opts;
        opts.time_limit = time_limit;
        opts.verbose = true;
        MiscLoop loop = solve_with_misc(build_model(inst, spec), inst, misc_rounds, opts);
        ModelOutcome out;
        out.report = loop.final.report;
        if (loop.final.solution.y.size() > 0) {
          out.lifted = loop.final.solution;
        }
        out.diagnostics = loop.final.diagnostics;
        out.separations = loop.outcomes;
        out.cuts = loop.cuts;
        if (misc_rounds > 0) {
          out.base_report = loop.initial.report;
        }
        emit_json(outcome_json(inst, spec, out), solve_out);
        return exit_for(out.report.status, !out.report.solution.values.empty());
      }
      const ModelOutcome out = run_model(inst, spec, time_limit);
      emit_json(outcome_json(inst, spec, out), solve_out);
      return exit_for(out.report.status, !out.report.solution.values.empty());
    }
    if (separate->parsed()) {
      const Instance inst = load_instance(sep_instance);
      const SolutionInput sol = load_solution(sep_solution, inst.n());
      std::vector<double> diag = sol.values;
      if (sol.matrix) {
        for (int i = 0; i < inst.n(); ++i) {
          diag[i] = (*sol.matrix)(i, i);
        }
      }
      emit_json(to_json(separate_diagonal(inst, diag), inst.n()), "");
      return kOk;
    }
    if (metrics->parsed()) {
      const Instance inst = load_instance(met_instance);
      const SolutionInput sol = load_solution(met_solution, inst.n());
      SolutionVector x;
      x.values = sol.values;
      x.objective = 0.0;
      for (int i = 0; i < inst.n(); ++i) {
        x.objective += inst.costs()[i] * sol.values[i];
      }
      if (met_ub && !(*met_ub > 0.0)) {
        throw UsageError("--ub must be positive");
      }
      nlohmann::json doc = to_json(metric_report(inst, x, std::nullopt, met_ub));
      doc["cost"] = x.objective;
      emit_json(doc, "");
      return kOk;
    }
    if (road->parsed()) {
      const Instance inst = load_instance(road_instance);
      const SolutionInput sol = load_solution(road_solution, inst.n());
      RoadReport rep;
      if (sol.exact) {
        rep = road_check(inst, *sol.exact);
      } else {
        SolutionVector x;
        x.values = sol.values;
        rep = road_check(inst, x);
      }
      emit_json(to_json(rep), "");
      return kOk;
    }
    if (bench->parsed()) {
      BenchConfig cfg;
      try {
        cfg = read_bench_config(bench_config);
      } catch (const std::exception &e) {
        throw UsageError(e.what());
      }
      if (!bench_out.empty()) {
        cfg.output_dir = bench_out;
      }
      if (bench_workers) {
        cfg.workers = *bench_workers;
      }
      const BenchResult res = run_benchmark(cfg, [&](const RunRecord &r) {
        if (!bench_quiet) {
          std::cerr << r.instance_id << ' ' << r.model << ' ' << r.status << ' ' << r.objective
                    << ' ' << r.wall_time << "s\n";
        }
      });
      const EmitPaths paths = emit_all(res.records, cfg.output_dir);
      for (const std::string &w : paths.warnings) {
        std::cerr << "warning: " << w << '\n';
      }
      bool timed_out = false;
      for (const RunRecord &r : res.records) {
        timed_out = timed_out || r.status == to_string(SolveStatus::TimeLimit);
      }
      std::cout << res.csv_path.string() << '\n';
      for (const auto &p : paths.files) {
        std::cout << p.string() << '\n';
      }
      return timed_out ? kPartial : kOk;
    }
    if (plot->parsed()) {
      csv::Table table;
      try {
        table = csv::read(plot_in);
      } catch (const std::exception &e) {
        throw UsageError(e.what());
      }
      if (table.has("instance_id") && table.has("model") && table.has("status")) {
        const std::filesystem::path dir =
            plot_out.empty() ? std::filesystem::path(plot_in).parent_path() : std::filesystem::path(plot_out);
        const EmitPaths paths = emit_all(read_records(plot_in), dir);
        for (const std::string &w : paths.warnings) {
          std::cerr << "warning: " << w << '\n';
        }
        for (const auto &p : paths.files) {
          std::cout << p.string() << '\n';
        }
        return kOk;
      }
      try {
        std::cout << plot_csv(plot_in, plot_out).string() << '\n';
      } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
      }
      return kOk;
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}

} // namespace compactknap::cli
