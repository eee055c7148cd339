#include <cmath>
#include <fstream>
#include <stdexcept>

#include "compactknap/report.hpp"

namespace compactknap {

namespace {

// NaN and infinities have no JSON form.
nlohmann::json num(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json one_based(const std::vector<int> &items) {
  nlohmann::json out = nlohmann::json::array();
  for (int i : items) {
    out.push_back(i + 1);
  }
  return out;
}

} // namespace

SolutionInput solution_from_json(const nlohmann::json &doc) {
  const nlohmann::json *values = &doc;
  const nlohmann::json *matrix = nullptr;
  if (doc.is_object()) {
    const nlohmann::json *holder = &doc;
    if (doc.contains("solution") && doc.at("solution").is_object()) {
      holder = &doc.at("solution");
    }
    if (!holder->contains("values")) {
      throw std::invalid_argument("solution file has no \"values\" array");
    }
    values = &holder->at("values");
    if (holder->contains("X")) {
      matrix = &holder->at("X");
    }
  }
  if (!values->is_array()) {
    throw std::invalid_argument("solution values must be an array");
  }
  SolutionInput in;
  std::vector<Rational> exact;
  bool all_exact = true;
  for (const auto &v : *values) {
    if (v.is_string()) {
      const Rational r = parse_rational(v.get<std::string>());
      exact.push_back(r);
      in.values.push_back(static_cast<double>(r));
    } else if (v.is_number_integer()) {
      exact.emplace_back(v.get<long long>());
      in.values.push_back(v.get<double>());
    } else if (v.is_number()) {
      all_exact = false;
      in.values.push_back(v.get<double>());
    } else {
      throw std::invalid_argument("solution entries must be numbers or rational strings");
    }
  }
  if (all_exact) {
    in.exact = std::move(exact);
  }
  if (matrix) {
    const std::size_t n = in.values.size();
    if (!matrix->is_array() || matrix->size() != n) {
      throw std::invalid_argument("X must be an n x n array");
    }
    Eigen::MatrixXd x(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto &row = matrix->at(r);
      if (!row.is_array() || row.size() != n) {
        throw std::invalid_argument("X must be an n x n array");
      }
      for (std::size_t c = 0; c < n; ++c) {
        x(r, c) = row.at(c).get<double>();
      }
    }
    in.matrix = std::move(x);
  }
  return in;
}

SolutionInput read_solution(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return solution_from_json(nlohmann::json::parse(in));
}

nlohmann::json outcome_json(const Instance &inst, const ModelSpec &spec, const ModelOutcome &out) {
  nlohmann::json doc;
  doc["model"] = to_string(spec.kind);
  if (is_penalized(spec.kind)) {
    doc["lambda"] = spec.lambda;
  }
  if (spec.kind == ModelKind::SdpPlus || spec.kind == ModelKind::PenPlus) {
    nlohmann::json tiers = nlohmann::json::array();
    for (Tier t : spec.tiers) {
      tiers.push_back(to_string(t));
    }
    doc["tiers"] = tiers;
    const TripleWindow w = spec.window.value_or(default_window(inst));
    doc["triple_window"] = w ? nlohmann::json(*w) : nlohmann::json("full");
  }
  const SolveReport &rep = out.report;
  doc["status"] = to_string(rep.status);
  doc["objective"] = num(rep.objective);
  doc["bound"] = num(rep.bound);
  doc["wall_time"] = rep.wall_time;
  doc["iterations"] = rep.iterations;
  if (!is_conic(spec.kind)) {
    doc["node_count"] = rep.node_count;
  }
  nlohmann::json sol;
  sol["values"] = rep.solution.values;
  sol["provenance"] = rep.solution.provenance;
  if (static_cast<int>(rep.solution.values.size()) == inst.n()) {
    doc["rounded"] = round_solution(rep.solution).oneBased();
  }
  if (out.lifted) {
    const LiftedSolution &ls = *out.lifted;
    nlohmann::json x = nlohmann::json::array();
    for (Eigen::Index r = 0; r < ls.x.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < ls.x.cols(); ++c) {
        row.push_back(ls.x(r, c));
      }
      x.push_back(row);
    }
    sol["X"] = x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ls.y, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = eig.eigenvalues();
    const Eigen::Index p = ev.size();
    doc["eigenvalues"] = {{"min", ev(0)},
                          {"max", ev(p - 1)},
                          {"second_largest", p >= 2 ? ev(p - 2) : 0.0}};
    try {
      const IntegralityVerdict v = verify_lifted_integrality(ls, 1e-6);
      doc["integrality"] = {
          {"is_binary", v.is_binary}, {"rank_y_one", v.rank_y_one}, {"degenerate", v.degenerate}};
    } catch (const std::invalid_argument &e) {
      doc["integrality"] = {{"error", e.what()}};
    }
  }
  if (out.diagnostics) {
    const ConicDiagnostics &d = *out.diagnostics;
    doc["diagnostics"] = {{"primal_residual", num(d.primal_residual)},
                          {"dual_residual", num(d.dual_residual)},
                          {"relative_gap", num(d.relative_gap)},
                          {"primal_objective", num(d.primal_objective)},
                          {"dual_objective", num(d.dual_objective)},
                          {"reduced_accuracy", d.reduced_accuracy}};
  }
  doc["solution"] = sol;
  if (spec.misc_rounds > 0) {
    nlohmann::json cuts = nlohmann::json::array();
    for (const SeparationOutcome &s : out.separations) {
      cuts.push_back(to_json(s, inst.n()));
    }
    doc["misc"] = {{"rounds", spec.misc_rounds}, {"separations", cuts}};
    if (out.base_report) {
      doc["misc"]["base_objective"] = num(out.base_report->objective);
      doc["misc"]["base_bound"] = num(out.base_report->bound);
    }
  }
  return doc;
}

nlohmann::json to_json(const MetricReport &m) {
  return {{"imp", num(m.imp)},
          {"comp", num(m.comp)},
          {"frac", num(m.frac)},
          {"gap_percent", num(m.gap_percent)},
          {"rounded", m.rounded.oneBased()}};
}

nlohmann::json to_json(const RoadReport &r) {
  nlohmann::json v = nlohmann::json::array();
  for (const RoadViolation &x : r.violations) {
    nlohmann::json e = {{"kind", x.kind}, {"lhs", x.lhs}, {"rhs", x.rhs}};
    e["i"] = x.i >= 0 ? nlohmann::json(x.i + 1) : nlohmann::json(nullptr);
    e["j"] = x.j >= 0 ? nlohmann::json(x.j + 1) : nlohmann::json(nullptr);
    if (r.exact) {
      e["lhs_exact"] = x.lhs_exact;
      e["rhs_exact"] = x.rhs_exact;
    }
    v.push_back(e);
  }
  return {{"holds", r.holds}, {"exact", r.exact}, {"violations", v}};
}

nlohmann::json to_json(const SeparationOutcome &s, int n) {
  nlohmann::json doc;
  if (s.cut) {
    doc["cut"] = s.cut->subset.oneBased();
    doc["complement"] = one_based(s.cut->complement(n));
  } else {
    doc["cut"] = nullptr;
    doc["complement"] = nullptr;
  }
  doc["lp_value"] = num(s.lp_value);
  doc["dp_value"] = num(s.dp_value);
  return doc;
}

} // namespace compactknap
