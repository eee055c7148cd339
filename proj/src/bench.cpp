#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "compactknap/bench.hpp"
#include "compactknap/csv.hpp"
#include "compactknap/instgen.hpp"
#include "compactknap/lp.hpp"

namespace compactknap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lambda_tag(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", lambda);
  return buf;
}

double diag_cost(const Instance &inst, const std::vector<double> &x) {
  double total = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    total += inst.costs()[i] * x[i];
  }
  return total;
}

} // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
  case ModelKind::Lp:
    return "lp";
  case ModelKind::Mip:
    return "mip";
  case ModelKind::Sdp:
    return "sdp";
  case ModelKind::SdpPlus:
    return "sdp+";
  case ModelKind::Pen:
    return "pen";
  case ModelKind::PenPlus:
    return "pen+";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string &text) {
  for (ModelKind k : {ModelKind::Lp, ModelKind::Mip, ModelKind::Sdp, ModelKind::SdpPlus,
                      ModelKind::Pen, ModelKind::PenPlus}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  throw std::invalid_argument("unknown model: " + text);
}

bool is_conic(ModelKind kind) { return kind != ModelKind::Lp && kind != ModelKind::Mip; }

bool is_penalized(ModelKind kind) { return kind == ModelKind::Pen || kind == ModelKind::PenPlus; }

ConicProgram build_model(const Instance &inst, const ModelSpec &spec) {
  ConicProgram prog;
  switch (spec.kind) {
  case ModelKind::Sdp:
  case ModelKind::SdpPlus:
    prog = build_naive(inst);
    break;
  case ModelKind::Pen:
  case ModelKind::PenPlus:
    prog = build_penalized(inst, PenaltyWeight(spec.lambda));
    break;
  default:
    throw std::invalid_argument("build_model needs a conic model");
  }
  if (spec.kind == ModelKind::SdpPlus || spec.kind == ModelKind::PenPlus) {
    add_strengthening(prog, inst, spec.tiers, spec.window.value_or(default_window(inst)));
  }
  return prog;
}

ModelOutcome run_model(const Instance &inst, const ModelSpec &spec, double time_limit) {
  ModelOutcome out;
  if (!is_conic(spec.kind)) {
    const LinearProgram lp = build_mkpc(inst);
    if (spec.kind == ModelKind::Lp) {
      out.report = solve_lp(lp);
      out.report.bound = out.report.objective;
    } else {
      MipLimits limits;
      limits.time_limit = time_limit;
      out.report = solve_mip(lp, limits);
    }
    return out;
  }
  ConicOptions opts;
  opts.time_limit = time_limit;
  MiscLoop loop = solve_with_misc(build_model(inst, spec), inst, spec.misc_rounds, opts);
  out.report = loop.final.report;
  if (loop.final.solution.y.size() > 0) {
    out.lifted = loop.final.solution;
  }
  out.diagnostics = loop.final.diagnostics;
  if (spec.misc_rounds > 0) {
    out.base_report = loop.initial.report;
    if (loop.initial.solution.y.size() > 0) {
      out.base_lifted = loop.initial.solution;
    }
    out.base_diagnostics = loop.initial.diagnostics;
  }
  out.separations = std::move(loop.outcomes);
  out.cuts = std::move(loop.cuts);
  return out;
}

namespace {

ModelSpec model_from_json(const nlohmann::json &j, std::optional<double> lambda) {
  static const std::set<std::string> known = {"kind",          "id",         "lambda", "lambdas",
                                              "tiers",         "misc_rounds", "triple_window"};
  for (const auto &[key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::invalid_argument("unknown model key: " + key);
    }
  }
  ModelSpec spec;
  spec.kind = parse_model_kind(j.at("kind").get<std::string>());
  if (lambda) {
    spec.lambda = PenaltyWeight(*lambda).value();
  }
  if (j.contains("tiers")) {
    spec.tiers = parse_tiers(j.at("tiers").get<std::string>());
  }
  if (j.contains("triple_window")) {
    const auto &w = j.at("triple_window");
    spec.window = w.is_string() ? parse_window(w.get<std::string>())
                                : parse_window(std::to_string(w.get<int>()));
  }
  spec.misc_rounds = j.value("misc_rounds", 0);
  if (spec.misc_rounds < 0) {
    throw std::invalid_argument("misc_rounds must be nonnegative");
  }
  if (spec.misc_rounds > 0 && !is_conic(spec.kind)) {
    throw std::invalid_argument("misc_rounds needs a conic model");
  }
  std::string id = j.value("id", to_string(spec.kind));
  if (is_penalized(spec.kind)) {
    id += "@" + lambda_tag(spec.lambda);
  }
  spec.id = id;
  return spec;
}

} // namespace

BenchConfig bench_config_from_json(const nlohmann::json &doc) {
  static const std::set<std::string> known = {"instances", "models", "time_limit", "output_dir",
                                              "workers"};
  for (const auto &[key, value] : doc.items()) {
    if (!known.count(key)) {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  BenchConfig cfg;
  if (doc.contains("instances")) {
    const auto &src = doc.at("instances");
    if (src.contains("directory")) {
      cfg.directory = src.at("directory").get<std::string>();
    }
    if (src.contains("generate")) {
      const auto &g = src.at("generate");
      GeneratorSpec gs;
      gs.count = g.at("count").get<int>();
      gs.n = g.at("n").get<int>();
      gs.seed_base = g.value("seed_base", std::uint64_t{1});
      if (gs.count < 0) {
        throw std::invalid_argument("generator count must be nonnegative");
      }
      cfg.generate = gs;
    }
    if (src.contains("ce")) {
      const auto &c = src.at("ce");
      CeSpec cs;
      cs.m_min = c.at("m_min").get<int>();
      cs.m_max = c.at("m_max").get<int>();
      cfg.ce = cs;
    }
  }
  for (const auto &m : doc.value("models", nlohmann::json::array())) {
    const ModelKind kind = parse_model_kind(m.at("kind").get<std::string>());
    if (is_penalized(kind) && m.contains("lambdas")) {
      for (const auto &l : m.at("lambdas")) {
        cfg.models.push_back(model_from_json(m, l.get<double>()));
      }
    } else {
      std::optional<double> lambda;
      if (m.contains("lambda")) {
        lambda = m.at("lambda").get<double>();
      }
      cfg.models.push_back(model_from_json(m, lambda));
    }
  }
  std::set<std::string> ids;
  for (const std::string &id : record_model_ids(cfg.models)) {
    if (!ids.insert(id).second) {
      throw std::invalid_argument("duplicate model id: " + id);
    }
  }
  cfg.time_limit = doc.value("time_limit", cfg.time_limit);
  if (!(cfg.time_limit > 0.0)) {
    throw std::invalid_argument("time_limit must be positive");
  }
  cfg.output_dir = doc.value("output_dir", cfg.output_dir.string());
  cfg.workers = doc.value("workers", cfg.workers);
  if (cfg.workers < 1) {
    throw std::invalid_argument("workers must be at least 1");
  }
  return cfg;
}

BenchConfig read_bench_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return bench_config_from_json(nlohmann::json::parse(in));
}

int effective_workers(int configured) {
  if (const char *env = std::getenv("COMPACTKNAP_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) {
      return v;
    }
  }
  return std::max(1, configured);
}

std::vector<BenchInstance> load_instances(const BenchConfig &cfg) {
  std::vector<BenchInstance> out;
  if (cfg.directory) {
    std::vector<std::filesystem::path> files;
    for (const auto &entry : std::filesystem::directory_iterator(*cfg.directory)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto &f : files) {
      out.push_back({f.stem().string(), read_instance(f)});
    }
  }
  if (cfg.generate) {
    for (int k = 0; k < cfg.generate->count; ++k) {
      const std::uint64_t seed = cfg.generate->seed_base + static_cast<std::uint64_t>(k);
      out.push_back({"gen-n" + std::to_string(cfg.generate->n) + "-s" + std::to_string(seed),
                     generate_instance(cfg.generate->n, seed)});
    }
  }
  if (cfg.ce) {
    for (int m = cfg.ce->m_min; m <= cfg.ce->m_max; ++m) {
      out.push_back({"ce-" + std::to_string(m), build_ce(m)});
    }
  }
  return out;
}

const std::vector<std::string> &record_columns() {
  static const std::vector<std::string> cols = {
      "instance_id", "n",          "model",       "kind",          "lambda",
      "misc_rounds", "status",     "objective",   "bound",         "cost",
      "wall_time",   "iterations", "imp",         "comp",          "frac",
      "gap_percent", "min_eigenvalue", "reduced_accuracy", "cuts", "misc_lp_value",
      "misc_dp_value", "cut_size"};
  return cols;
}

std::vector<std::string> record_fields(const RunRecord &r) {
  return {r.instance_id,
          std::to_string(r.n),
          r.model,
          r.kind,
          csv::number(r.lambda),
          std::to_string(r.misc_rounds),
          r.status,
          csv::number(r.objective),
          csv::number(r.bound),
          csv::number(r.cost),
          csv::number(r.wall_time),
          std::to_string(r.iterations),
          csv::number(r.imp),
          csv::number(r.comp),
          csv::number(r.frac),
          csv::number(r.gap_percent),
          csv::number(r.min_eigenvalue),
          r.reduced_accuracy ? "1" : "0",
          std::to_string(r.cuts),
          csv::number(r.misc_lp_value),
          csv::number(r.misc_dp_value),
          std::to_string(r.cut_size)};
}

RunRecord record_from_fields(const std::vector<std::string> &header,
                             const std::vector<std::string> &fields) {
  std::map<std::string, std::string> f;
  for (std::size_t k = 0; k < header.size() && k < fields.size(); ++k) {
    f[header[k]] = fields[k];
  }
  const auto num = [&](const char *name) { return csv::to_number(f[name]); };
  const auto integer = [&](const char *name) {
    const double v = num(name);
    return std::isnan(v) ? 0L : static_cast<long>(v);
  };
  RunRecord r;
  r.instance_id = f["instance_id"];
  r.n = static_cast<int>(integer("n"));
  r.model = f["model"];
  r.kind = f["kind"];
  r.lambda = num("lambda");
  r.misc_rounds = static_cast<int>(integer("misc_rounds"));
  r.status = f["status"];
  r.objective = num("objective");
  r.bound = num("bound");
  r.cost = num("cost");
  r.wall_time = num("wall_time");
  r.iterations = integer("iterations");
  r.imp = num("imp");
  r.comp = num("comp");
  r.frac = num("frac");
  r.gap_percent = num("gap_percent");
  r.min_eigenvalue = num("min_eigenvalue");
  r.reduced_accuracy = f["reduced_accuracy"] == "1";
  r.cuts = static_cast<int>(integer("cuts"));
  r.misc_lp_value = num("misc_lp_value");
  r.misc_dp_value = num("misc_dp_value");
  r.cut_size = static_cast<int>(integer("cut_size"));
  return r;
}

std::vector<RunRecord> read_records(const std::filesystem::path &path) {
  const csv::Table t = csv::read(path);
  std::vector<RunRecord> out;
  for (const auto &row : t.rows) {
    out.push_back(record_from_fields(t.header, row));
  }
  return out;
}

std::vector<std::string> record_model_ids(const std::vector<ModelSpec> &models) {
  std::vector<std::string> ids;
  for (const ModelSpec &m : models) {
    ids.push_back(m.id);
    if (m.misc_rounds > 0) {
      ids.push_back(m.id + ":misc");
    }
  }
  return ids;
}

namespace {

RunRecord record_for(const BenchInstance &bi, const ModelSpec &spec, const std::string &model,
                     const SolveReport &rep, const LiftedSolution *lifted) {
  RunRecord r;
  r.instance_id = bi.id;
  r.n = bi.instance.n();
  r.model = model;
  r.kind = to_string(spec.kind);
  r.lambda = is_penalized(spec.kind) ? spec.lambda : kNaN;
  r.misc_rounds = spec.misc_rounds;
  r.status = to_string(rep.status);
  r.objective = rep.objective;
  r.bound = rep.bound;
  r.wall_time = rep.wall_time;
  r.iterations = rep.iterations;
  r.gap_percent = kNaN;
  r.min_eigenvalue = lifted ? lifted->minEigenvalue() : kNaN;
  r.misc_lp_value = kNaN;
  r.misc_dp_value = kNaN;
  const auto &x = rep.solution.values;
  if (static_cast<int>(x.size()) == bi.instance.n()) {
    const MetricReport m = metric_report(bi.instance, rep.solution);
    r.cost = diag_cost(bi.instance, x);
    r.imp = m.imp;
    r.comp = m.comp;
    r.frac = m.frac;
  } else {
    r.cost = r.imp = r.comp = r.frac = kNaN;
  }
  return r;
}

} // namespace

std::vector<RunRecord> make_records(const BenchInstance &bi, const ModelSpec &spec,
                                    const ModelOutcome &out) {
  std::vector<RunRecord> records;
  if (spec.misc_rounds > 0 && out.base_report) {
    RunRecord base = record_for(bi, spec, spec.id, *out.base_report,
                                out.base_lifted ? &*out.base_lifted : nullptr);
    if (!out.separations.empty()) {
      base.misc_lp_value = out.separations.front().lp_value;
      base.misc_dp_value = out.separations.front().dp_value;
      base.cut_size = out.separations.front().cut
                          ? static_cast<int>(out.separations.front().cut->subset.size())
                          : 0;
    }
    base.reduced_accuracy = out.base_diagnostics && out.base_diagnostics->reduced_accuracy;
    records.push_back(base);
    RunRecord misc = record_for(bi, spec, spec.id + ":misc", out.report,
                                out.lifted ? &*out.lifted : nullptr);
    misc.cuts = static_cast<int>(out.cuts.size());
    misc.reduced_accuracy = out.diagnostics && out.diagnostics->reduced_accuracy;
    if (!out.separations.empty()) {
      misc.misc_lp_value = out.separations.back().lp_value;
      misc.misc_dp_value = out.separations.back().dp_value;
    }
    if (!out.cuts.empty()) {
      misc.cut_size = static_cast<int>(out.cuts.back().subset.size());
    }
    records.push_back(misc);
  } else {
    RunRecord r = record_for(bi, spec, spec.id, out.report, out.lifted ? &*out.lifted : nullptr);
    if (out.diagnostics) {
      r.reduced_accuracy = out.diagnostics->reduced_accuracy;
    }
    records.push_back(r);
  }
  return records;
}

void fill_gaps(std::vector<RunRecord> &records) {
  std::map<std::string, double> ub;
  for (const RunRecord &r : records) {
    if (r.kind == "mip" && r.status == to_string(SolveStatus::Optimal)) {
      ub[r.instance_id] = r.objective;
    }
  }
  for (RunRecord &r : records) {
    r.gap_percent = kNaN;
    const auto it = ub.find(r.instance_id);
    if (it == ub.end() || r.kind == "pen" || r.kind == "pen+" || !(it->second > 0.0) ||
        std::isnan(r.bound) || r.status == to_string(SolveStatus::SolverFailure)) {
      continue;
    }
    r.gap_percent = gap(it->second, r.bound);
  }
}

BenchResult run_benchmark(const BenchConfig &cfg,
                          const std::function<void(const RunRecord &)> &progress) {
  const std::vector<BenchInstance> instances = load_instances(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  BenchResult result;
  result.csv_path = cfg.output_dir / "runs.csv";

  std::ofstream sink(result.csv_path, std::ios::binary | std::ios::trunc);
  if (!sink) {
    throw std::runtime_error("cannot write " + result.csv_path.string());
  }
  sink << csv::join(record_columns()) << '\n' << std::flush;

  const std::size_t models = cfg.models.size();
  const std::size_t total = instances.size() * models;
  std::vector<std::vector<RunRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) {
        return;
      }
      const BenchInstance &bi = instances[task / models];
      const ModelSpec &spec = cfg.models[task % models];
      std::vector<RunRecord> recs;
      try {
        recs = make_records(bi, spec, run_model(bi.instance, spec, cfg.time_limit));
      } catch (const std::exception &) {
        SolveReport failed;
        failed.status = SolveStatus::SolverFailure;
        recs = {record_for(bi, spec, spec.id, failed, nullptr)};
        if (spec.misc_rounds > 0) {
          recs.push_back(record_for(bi, spec, spec.id + ":misc", failed, nullptr));
        }
      }
      std::lock_guard<std::mutex> guard(lock);
      for (const RunRecord &r : recs) {
        sink << csv::join(record_fields(r)) << '\n';
        if (progress) {
          progress(r);
        }
      }
      sink << std::flush;
      slots[task] = std::move(recs);
    }
  };
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(effective_workers(cfg.workers)),
                            std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto &t : pool) {
      t.join();
    }
  }
  sink.close();

  for (auto &slot : slots) {
    for (auto &r : slot) {
      result.records.push_back(std::move(r));
    }
  }
  fill_gaps(result.records);
  csv::Table table;
  table.header = record_columns();
  for (const RunRecord &r : result.records) {
    table.rows.push_back(record_fields(r));
  }
  csv::write(result.csv_path, table);
  return result;
}

} // namespace compactknap
