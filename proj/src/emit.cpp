#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "compactknap/emit.hpp"
#include "compactknap/svg.hpp"

namespace compactknap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::string kOptimal = "Optimal";

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string base_model(const std::string &model) {
  return ends_with(model, ":misc") ? model.substr(0, model.size() - 5) : model;
}

// Instance ids in first-seen order.
std::vector<std::string> instance_order(const std::vector<RunRecord> &records) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const RunRecord &r : records) {
    if (seen.insert(r.instance_id).second) {
      ids.push_back(r.instance_id);
    }
  }
  return ids;
}

std::vector<std::string> model_order(const std::vector<RunRecord> &records) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const RunRecord &r : records) {
    if (seen.insert(r.model).second) {
      ids.push_back(r.model);
    }
  }
  return ids;
}

} // namespace

csv::Table gap_curve_table(const std::vector<RunRecord> &records, const GapPairing &pairing,
                           std::vector<std::string> *skipped) {
  std::map<std::pair<std::string, std::string>, const RunRecord *> by;
  for (const RunRecord &r : records) {
    by[{r.instance_id, r.model}] = &r;
  }
  struct Row {
    std::string id;
    double lp, sdp, sdp_plus, misc;
  };
  std::vector<Row> rows;
  for (const std::string &id : instance_order(records)) {
    const auto mip = by.find({id, pairing.mip});
    if (mip == by.end() || mip->second->status != kOptimal || !(mip->second->objective > 0.0)) {
      if (skipped) {
        skipped->push_back(id);
      }
      continue;
    }
    const double ub = mip->second->objective;
    const auto lb_gap = [&](const std::string &model) {
      if (model.empty()) {
        return kNaN;
      }
      const auto it = by.find({id, model});
      if (it == by.end() || it->second->status == "SolverFailure" || std::isnan(it->second->bound)) {
        return kNaN;
      }
      return gap(ub, it->second->bound);
    };
    rows.push_back({id, lb_gap(pairing.lp), lb_gap(pairing.sdp), lb_gap(pairing.sdp_plus),
                    lb_gap(pairing.misc)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
    const double ka = std::isnan(a.lp) ? std::numeric_limits<double>::infinity() : a.lp;
    const double kb = std::isnan(b.lp) ? std::numeric_limits<double>::infinity() : b.lp;
    return ka != kb ? ka < kb : a.id < b.id;
  });
  csv::Table t;
  t.header = {"instance_rank", "instance_id", "gap_lp", "gap_sdp", "gap_sdp_plus", "gap_misc"};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row &r = rows[k];
    t.rows.push_back({std::to_string(k + 1), r.id, csv::number(r.lp), csv::number(r.sdp),
                      csv::number(r.sdp_plus), csv::number(r.misc)});
  }
  return t;
}

csv::Table tradeoff_table(const std::vector<RunRecord> &records,
                          const std::vector<double> &lambdas) {
  csv::Table t;
  t.header = {"instance_id", "model", "lambda", "comp", "imp"};
  for (const RunRecord &r : records) {
    bool keep = r.kind == "mip" || (r.kind == "sdp+" && r.model == base_model(r.model));
    if (r.kind == "pen" || r.kind == "pen+") {
      keep = r.model == base_model(r.model) &&
             (lambdas.empty() || std::any_of(lambdas.begin(), lambdas.end(), [&](double l) {
                return std::abs(l - r.lambda) <= 1e-12 * std::max(1.0, std::abs(l));
              }));
    }
    if (!keep || std::isnan(r.comp) || std::isnan(r.imp)) {
      continue;
    }
    t.rows.push_back(
        {r.instance_id, r.model, csv::number(r.lambda), csv::number(r.comp), csv::number(r.imp)});
  }
  return t;
}

csv::Table fractionality_table(const std::vector<RunRecord> &records) {
  struct Acc {
    std::string kind;
    double lambda = kNaN;
    int runs = 0, misc_runs = 0;
    double sum = 0.0, misc_sum = 0.0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const RunRecord &r : records) {
    const std::string base = base_model(r.model);
    if (!acc.count(base)) {
      order.push_back(base);
      acc[base].kind = r.kind;
      acc[base].lambda = r.lambda;
    }
    if (std::isnan(r.frac)) {
      continue;
    }
    Acc &a = acc[base];
    if (base == r.model) {
      a.sum += r.frac;
      ++a.runs;
    } else {
      a.misc_sum += r.frac;
      ++a.misc_runs;
    }
  }
  csv::Table t;
  t.header = {"model", "kind",      "lambda",         "runs",
              "mean_frac", "misc_runs", "mean_frac_misc", "reduction"};
  for (const std::string &model : order) {
    const Acc &a = acc[model];
    const double mean = a.runs ? a.sum / a.runs : kNaN;
    const double misc = a.misc_runs ? a.misc_sum / a.misc_runs : kNaN;
    double reduction = kNaN;
    if (!std::isnan(mean) && !std::isnan(misc)) {
      reduction = misc > 0.0 ? mean / misc : std::numeric_limits<double>::infinity();
    }
    t.rows.push_back({model, a.kind, csv::number(a.lambda), std::to_string(a.runs),
                      csv::number(mean), std::to_string(a.misc_runs), csv::number(misc),
                      std::isinf(reduction) ? "inf" : csv::number(reduction)});
  }
  return t;
}

csv::Table performance_profile_table(const std::vector<RunRecord> &records) {
  const std::vector<std::string> models = model_order(records);
  std::map<std::string, std::map<std::string, double>> times; // instance -> model -> time
  for (const RunRecord &r : records) {
    if (r.status == kOptimal && std::isfinite(r.wall_time)) {
      times[r.instance_id][r.model] = std::max(r.wall_time, 1e-6);
    }
  }
  const double count = static_cast<double>(times.size());
  csv::Table t;
  t.header = {"model", "tau", "fraction"};
  for (const std::string &m : models) {
    std::vector<double> ratios;
    for (const auto &[inst, per] : times) {
      const auto it = per.find(m);
      if (it == per.end()) {
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (const auto &[model, time] : per) {
        best = std::min(best, time);
      }
      ratios.push_back(it->second / best);
    }
    std::sort(ratios.begin(), ratios.end());
    t.rows.push_back({m, "1", csv::number(0.0)});
    for (std::size_t k = 0; k < ratios.size(); ++k) {
      if (k + 1 < ratios.size() && ratios[k + 1] == ratios[k]) {
        continue;
      }
      t.rows.push_back({m, csv::number(ratios[k]), csv::number(static_cast<double>(k + 1) / count)});
    }
  }
  return t;
}

namespace {

std::string plot_gap(const csv::Table &t) {
  svg::Chart chart;
  chart.title = "Relative gap to the MIP optimum";
  chart.x_label = "instances (by increasing LP gap)";
  chart.y_label = "gap (%)";
  const std::vector<std::pair<std::string, std::string>> cols = {
      {"gap_lp", "LP"}, {"gap_sdp", "SDP"}, {"gap_sdp_plus", "SDP+"}, {"gap_misc", "SDP+ with MISC"}};
  for (const auto &[col, label] : cols) {
    svg::Series s{label, {}};
    const std::size_t c = t.column(col);
    const std::size_t rank = t.column("instance_rank");
    for (const auto &row : t.rows) {
      s.points.emplace_back(csv::to_number(row[rank]), csv::to_number(row[c]));
    }
    const bool any = std::any_of(s.points.begin(), s.points.end(),
                                 [](const auto &p) { return std::isfinite(p.second); });
    if (any) {
      chart.series.push_back(std::move(s));
    }
  }
  return svg::render(chart);
}

std::string plot_tradeoff(const csv::Table &t) {
  svg::Chart chart;
  chart.title = "Compactness against imprecision";
  chart.x_label = "comp";
  chart.y_label = "imp";
  chart.lines = false;
  std::vector<std::string> order;
  std::map<std::string, svg::Series> series;
  const std::size_t m = t.column("model");
  const std::size_t c = t.column("comp");
  const std::size_t i = t.column("imp");
  for (const auto &row : t.rows) {
    if (!series.count(row[m])) {
      order.push_back(row[m]);
      series[row[m]].label = row[m];
    }
    series[row[m]].points.emplace_back(csv::to_number(row[c]), csv::to_number(row[i]));
  }
  for (const std::string &name : order) {
    chart.series.push_back(series[name]);
  }
  return svg::render(chart);
}

std::string plot_profile(const csv::Table &t) {
  svg::Chart chart;
  chart.title = "Performance profile (wall time)";
  chart.x_label = "tau (time / best time)";
  chart.y_label = "fraction of instances";
  chart.log_x = true;
  chart.steps = true;
  std::vector<std::string> order;
  std::map<std::string, svg::Series> series;
  const std::size_t m = t.column("model");
  const std::size_t tau = t.column("tau");
  const std::size_t f = t.column("fraction");
  for (const auto &row : t.rows) {
    if (!series.count(row[m])) {
      order.push_back(row[m]);
      series[row[m]].label = row[m];
    }
    series[row[m]].points.emplace_back(csv::to_number(row[tau]), csv::to_number(row[f]));
  }
  for (const std::string &name : order) {
    chart.series.push_back(series[name]);
  }
  return svg::render(chart);
}

std::string plot_fractionality(const csv::Table &t) {
  svg::Chart chart;
  chart.title = "Mean fractionality of penalized models";
  chart.x_label = "lambda";
  chart.y_label = "mean frac";
  chart.log_x = true;
  svg::Series plain{"without MISC", {}};
  svg::Series misc{"with MISC", {}};
  const std::size_t l = t.column("lambda");
  const std::size_t a = t.column("mean_frac");
  const std::size_t b = t.column("mean_frac_misc");
  std::vector<std::vector<std::string>> rows = t.rows;
  std::stable_sort(rows.begin(), rows.end(), [&](const auto &x, const auto &y) {
    return csv::to_number(x[l]) < csv::to_number(y[l]);
  });
  for (const auto &row : rows) {
    const double lambda = csv::to_number(row[l]);
    if (std::isnan(lambda)) {
      continue;
    }
    plain.points.emplace_back(lambda, csv::to_number(row[a]));
    misc.points.emplace_back(lambda, csv::to_number(row[b]));
  }
  chart.series = {plain, misc};
  return svg::render(chart);
}

} // namespace

std::string plot_table(const csv::Table &table) {
  if (table.has("instance_rank")) {
    return plot_gap(table);
  }
  if (table.has("tau")) {
    return plot_profile(table);
  }
  if (table.has("mean_frac")) {
    return plot_fractionality(table);
  }
  if (table.has("comp") && table.has("imp") && table.has("model")) {
    return plot_tradeoff(table);
  }
  throw std::invalid_argument("unrecognised CSV layout for plotting");
}

std::filesystem::path plot_csv(const std::filesystem::path &csv_path,
                               const std::filesystem::path &svg_path) {
  std::filesystem::path target = svg_path;
  if (target.empty()) {
    target = csv_path;
    target.replace_extension(".svg");
  }
  const std::string doc = plot_table(csv::read(csv_path));
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + target.string());
  }
  out << doc;
  return target;
}

EmitPaths emit_all(const std::vector<RunRecord> &records, const std::filesystem::path &dir,
                   const GapPairing &pairing, const std::vector<double> &lambdas) {
  std::filesystem::create_directories(dir);
  EmitPaths paths;
  std::vector<std::string> skipped;
  const auto emit = [&](const csv::Table &t, const std::string &name, bool svg) {
    const auto path = dir / (name + ".csv");
    csv::write(path, t);
    paths.files.push_back(path);
    if (svg) {
      paths.files.push_back(plot_csv(path));
    }
  };
  emit(gap_curve_table(records, pairing, &skipped), "gap_curve", true);
  for (const std::string &id : skipped) {
    paths.warnings.push_back("no optimal MIP record for " + id + "; left out of gap_curve");
  }
  emit(tradeoff_table(records, lambdas), "tradeoff", true);
  emit(fractionality_table(records), "fractionality", true);
  emit(performance_profile_table(records), "profile", true);
  return paths;
}

} // namespace compactknap
