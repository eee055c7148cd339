#ifndef COMPACTKNAP_BENCH_HPP
#define COMPACTKNAP_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "compactknap/cuts.hpp"
#include "compactknap/instance.hpp"
#include "compactknap/metrics.hpp"
#include "compactknap/sdp.hpp"

namespace compactknap {

enum class ModelKind { Lp, Mip, Sdp, SdpPlus, Pen, PenPlus };

std::string to_string(ModelKind kind);
/// "lp", "mip", "sdp", "sdp+", "pen", "pen+".
ModelKind parse_model_kind(const std::string &text);
bool is_conic(ModelKind kind);
bool is_penalized(ModelKind kind);

/// Single-lambda default for penalized runs.
inline constexpr double kDefaultLambda = 1e-3;

struct ModelSpec {
  std::string id;
  ModelKind kind = ModelKind::Lp;
  double lambda = kDefaultLambda;
  std::set<Tier> tiers = all_tiers();
  /// Unset: default_window(instance).
  std::optional<TripleWindow> window;
  int misc_rounds = 0;
};

/// Builds the conic program of a conic model spec.
ConicProgram build_model(const Instance &inst, const ModelSpec &spec);

struct ModelOutcome {
  SolveReport report;
  std::optional<LiftedSolution> lifted;
  std::optional<ConicDiagnostics> diagnostics;
  /// With MISC rounds: the solve before any cut.
  std::optional<SolveReport> base_report;
  std::optional<LiftedSolution> base_lifted;
  std::optional<ConicDiagnostics> base_diagnostics;
  std::vector<SeparationOutcome> separations;
  std::vector<MiscCut> cuts;
};

/// Runs one model. time_limit applies per solve.
ModelOutcome run_model(const Instance &inst, const ModelSpec &spec, double time_limit);

struct GeneratorSpec {
  int count = 0;
  int n = 0;
  std::uint64_t seed_base = 1;
};

struct CeSpec {
  int m_min = 2;
  int m_max = 2;
};

/**
 * Experiment configuration, read from JSON:
 *
 *   {"instances": {"directory": "dir"} | {"generate": {"count", "n", "seed_base"}}
 *                 | {"ce": {"m_min", "m_max"}},
 *    "models": [{"kind": "pen+", "lambdas": [0.1, 1e-6], "tiers": "T1,T2,T3,T4",
 *                "triple_window": 6 | "full", "misc_rounds": 1, "id": "..."}],
 *    "time_limit": 600, "output_dir": "out", "workers": 1}
 */
struct BenchConfig {
  std::optional<std::filesystem::path> directory;
  std::optional<GeneratorSpec> generate;
  std::optional<CeSpec> ce;
  std::vector<ModelSpec> models;
  double time_limit = 600.0;
  std::filesystem::path output_dir = "bench_out";
  int workers = 1;
};

/// Throws std::invalid_argument on invalid values (negative lambda or
/// rounds, non-positive time limit, unknown kinds or keys).
BenchConfig bench_config_from_json(const nlohmann::json &doc);
BenchConfig read_bench_config(const std::filesystem::path &path);

/// Worker count after the COMPACTKNAP_WORKERS override; at least 1.
int effective_workers(int configured);

struct BenchInstance {
  std::string id;
  Instance instance;
};

std::vector<BenchInstance> load_instances(const BenchConfig &cfg);

struct RunRecord {
  std::string instance_id;
  int n = 0;
  std::string model;
  std::string kind;
  double lambda = 0.0; // NaN for unpenalized models
  int misc_rounds = 0;
  std::string status;
  double objective = 0.0;
  double bound = 0.0;
  double cost = 0.0; // c . x at the returned x
  double wall_time = 0.0;
  long iterations = 0;
  double imp = 0.0;
  double comp = 0.0;
  double frac = 0.0;
  double gap_percent = 0.0; // filled once the MIP record is known
  double min_eigenvalue = 0.0;
  bool reduced_accuracy = false;
  int cuts = 0;
  double misc_lp_value = 0.0;
  double misc_dp_value = 0.0;
  int cut_size = 0;
};

/// CSV column names, in order. wall_time is the only timing column.
const std::vector<std::string> &record_columns();
std::vector<std::string> record_fields(const RunRecord &r);
RunRecord record_from_fields(const std::vector<std::string> &header,
                             const std::vector<std::string> &fields);
std::vector<RunRecord> read_records(const std::filesystem::path &path);

/// Model ids in record order: each spec id, followed by id + ":misc" when the
/// spec has MISC rounds. (A JSON model entry with a lambda list is expanded
/// into one spec per lambda when the config is read.)
std::vector<std::string> record_model_ids(const std::vector<ModelSpec> &models);

/// Records of one (instance, spec) run, base first.
std::vector<RunRecord> make_records(const BenchInstance &bi, const ModelSpec &spec,
                                    const ModelOutcome &out);

/// Sets gap_percent against each instance's optimal MIP record (NaN when
/// there is none or the model is penalized).
void fill_gaps(std::vector<RunRecord> &records);

struct BenchResult {
  std::vector<RunRecord> records;
  std::filesystem::path csv_path;
};

/**
 * Solves every (instance, model) pair on a pool of workers. Records are
 * appended to <output_dir>/runs.csv as they finish; at the end the file is
 * rewritten in canonical order (instances as loaded, models as configured)
 * with gaps filled in. Solver failures become records, never errors.
 * `progress`, when set, is called after each pair under the sink lock.
 */
BenchResult run_benchmark(const BenchConfig &cfg,
                          const std::function<void(const RunRecord &)> &progress = {});

} // namespace compactknap

#endif
