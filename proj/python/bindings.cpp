// Python bindings. Structured values cross the boundary as JSON text; the
// package in python/compactknap decodes them.
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "compactknap/bench.hpp"
#include "compactknap/cuts.hpp"
#include "compactknap/instgen.hpp"
#include "compactknap/metrics.hpp"
#include "compactknap/report.hpp"

namespace py = pybind11;
using namespace compactknap;

namespace {

Instance load(const std::string &text) { return parse_instance(text); }

void check_length(const Instance &inst, const std::vector<double> &x) {
  if (static_cast<int>(x.size()) != inst.n()) {
    throw std::invalid_argument("solution has " + std::to_string(x.size()) +
                                " entries, instance has " + std::to_string(inst.n()));
  }
}

std::string solve(const std::string &instance, const std::string &model, double lambda,
                  int misc_rounds, double time_limit, const std::string &tiers,
                  const std::string &window) {
  const Instance inst = load(instance);
  ModelSpec spec;
  spec.kind = parse_model_kind(model);
  spec.lambda = PenaltyWeight(lambda).value();
  spec.tiers = parse_tiers(tiers);
  if (!window.empty()) {
    spec.window = parse_window(window);
  }
  spec.id = to_string(spec.kind);
  spec.misc_rounds = misc_rounds;
  if (misc_rounds > 0 && !is_conic(spec.kind)) {
    throw std::invalid_argument("misc rounds need a conic model");
  }
  ModelOutcome out;
  {
    py::gil_scoped_release release;
    out = run_model(inst, spec, time_limit);
  }
  return outcome_json(inst, spec, out).dump();
}

std::string separate(const std::string &instance, const std::vector<double> &diag) {
  const Instance inst = load(instance);
  check_length(inst, diag);
  return to_json(separate_diagonal(inst, diag), inst.n()).dump();
}

std::string metrics(const std::string &instance, const std::vector<double> &x,
                    std::optional<double> ub) {
  const Instance inst = load(instance);
  check_length(inst, x);
  SolutionVector sv;
  sv.values = x;
  for (int i = 0; i < inst.n(); ++i) {
    sv.objective += inst.costs()[i] * x[i];
  }
  nlohmann::json doc = to_json(metric_report(inst, sv, std::nullopt, ub));
  doc["cost"] = sv.objective;
  return doc.dump();
}

std::string road(const std::string &instance, const std::vector<std::string> &x) {
  const Instance inst = load(instance);
  std::vector<Rational> exact;
  for (const std::string &v : x) {
    exact.push_back(parse_rational(v));
  }
  if (static_cast<int>(exact.size()) != inst.n()) {
    throw std::invalid_argument("solution length does not match the instance");
  }
  return to_json(road_check(inst, exact)).dump();
}

std::string road_float(const std::string &instance, const std::vector<double> &x, double tol) {
  const Instance inst = load(instance);
  check_length(inst, x);
  SolutionVector sv;
  sv.values = x;
  return to_json(road_check(inst, sv, tol)).dump();
}

std::string bench(const std::string &config, int workers) {
  BenchConfig cfg = bench_config_from_json(nlohmann::json::parse(config));
  if (workers > 0) {
    cfg.workers = workers;
  }
  py::gil_scoped_release release;
  return run_benchmark(cfg).csv_path.string();
}

} // namespace

PYBIND11_MODULE(_compactknap, m) {
  m.doc() = "compactknap native module";

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("generate", [](int n, std::uint64_t seed) { return serialize(generate_instance(n, seed)); },
        py::arg("n"), py::arg("seed"));
  m.def("generate_ce", [](int m_) { return serialize(build_ce(m_)); }, py::arg("m"));
  m.def("normalize", [](const std::string &text) { return serialize(load(text)); },
        py::arg("instance"));
  m.def("solve", &solve, py::arg("instance"), py::arg("model"),
        py::arg("lambda_") = kDefaultLambda, py::arg("misc_rounds") = 0,
        py::arg("time_limit") = 600.0, py::arg("tiers") = "T1,T2,T3,T4",
        py::arg("window") = "");
  m.def("separate", &separate, py::arg("instance"), py::arg("diag"));
  m.def("metrics", &metrics, py::arg("instance"), py::arg("x"), py::arg("ub") = std::nullopt);
  m.def("road_exact", &road, py::arg("instance"), py::arg("x"));
  m.def("road", &road_float, py::arg("instance"), py::arg("x"), py::arg("tol") = 1e-9);
  m.def("frac", [](const std::vector<double> &x) {
    SolutionVector sv;
    sv.values = x;
    return frac(sv);
  });
  m.def("gap", &gap, py::arg("ub"), py::arg("lb"));
  m.def("bench", &bench, py::arg("config"), py::arg("workers") = 0);
}
