#ifndef COMPACTKNAP_EMIT_HPP
#define COMPACTKNAP_EMIT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "compactknap/bench.hpp"
#include "compactknap/csv.hpp"

namespace compactknap {

/// Model ids feeding the gap-curve columns; an empty id drops the column
/// values (left empty).
struct GapPairing {
  std::string mip = "mip";
  std::string lp = "lp";
  std::string sdp = "sdp";
  std::string sdp_plus = "sdp+";
  std::string misc = "sdp+:misc";
};

/// Columns instance_rank, instance_id, gap_lp, gap_sdp, gap_sdp_plus,
/// gap_misc; rows sorted by gap_lp (ties by instance id). Instances without
/// an optimal MIP record are skipped and listed in `skipped`.
csv::Table gap_curve_table(const std::vector<RunRecord> &records, const GapPairing &pairing,
                           std::vector<std::string> *skipped = nullptr);

/// Columns instance_id, model, lambda, comp, imp for penalized records whose
/// lambda is in the list (all penalized records when it is empty), plus the
/// mip and sdp+ records.
csv::Table tradeoff_table(const std::vector<RunRecord> &records,
                          const std::vector<double> &lambdas);

/// One row per base model: model, kind, lambda, runs, mean_frac, misc_runs,
/// mean_frac_misc, reduction (mean_frac / mean_frac_misc).
csv::Table fractionality_table(const std::vector<RunRecord> &records);

/// Performance profile over wall time: model, tau, fraction. A model solves
/// an instance when its status is Optimal.
csv::Table performance_profile_table(const std::vector<RunRecord> &records);

/// Renders an SVG from one of the tables above, recognised by its header.
std::string plot_table(const csv::Table &table);
/// Reads a CSV and writes the SVG next to it (or to svg_path when given).
std::filesystem::path plot_csv(const std::filesystem::path &csv_path,
                               const std::filesystem::path &svg_path = {});

struct EmitPaths {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Writes gap_curve, tradeoff, fractionality and profile CSVs plus the SVGs
/// into dir.
EmitPaths emit_all(const std::vector<RunRecord> &records, const std::filesystem::path &dir,
                   const GapPairing &pairing = {}, const std::vector<double> &lambdas = {});

} // namespace compactknap

#endif
