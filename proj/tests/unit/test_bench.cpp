#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "compactknap/bench.hpp"
#include "compactknap/csv.hpp"
#include "compactknap/emit.hpp"
#include "compactknap/instgen.hpp"
#include "compactknap/report.hpp"
#include "compactknap/svg.hpp"

using namespace compactknap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("compactknap-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// runs.csv without the wall_time column.
std::vector<std::vector<std::string>> untimed(const fs::path &p) {
  csv::Table t = csv::read(p);
  const std::size_t col = t.column("wall_time");
  for (auto &row : t.rows) {
    row.erase(row.begin() + static_cast<long>(col));
  }
  return t.rows;
}

nlohmann::json small_config(const fs::path &out, int workers) {
  return {{"instances", {{"ce", {{"m_min", 2}, {"m_max", 4}}}}},
          {"models",
           {{{"kind", "mip"}},
            {{"kind", "lp"}},
            {{"kind", "sdp"}},
            {{"kind", "sdp+"}, {"misc_rounds", 1}},
            {{"kind", "pen+"}, {"lambdas", {0.1, 1e-3}}, {"misc_rounds", 1}}}},
          {"time_limit", 60},
          {"output_dir", out.string()},
          {"workers", workers}};
}

} // namespace

TEST_CASE("csv quoting and parsing") {
  const std::vector<std::string> fields = {"plain", "a,b", "say \"hi\"", "two\nlines", ""};
  const csv::Table t = csv::parse(csv::join({"h1", "h2", "h3", "h4", "h5"}) + "\n" +
                                  csv::join(fields) + "\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == fields);
  CHECK(t.column("h3") == 2);
  CHECK_FALSE(t.has("h9"));
  CHECK_THROWS_AS(t.column("h9"), std::out_of_range);
}

TEST_CASE("csv numbers round trip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = ud(rng) * std::pow(10.0, i % 20 - 10);
    CHECK(csv::to_number(csv::number(v)) == v);
  }
  CHECK(csv::number(std::nan("")).empty());
  CHECK(std::isnan(csv::to_number("")));
  CHECK(std::isnan(csv::to_number("x1")));
}

TEST_CASE("csv write is complete") {
  const fs::path dir = scratch("csv");
  csv::Table t;
  t.header = {"a", "b"};
  t.rows = {{"1", "x,y"}, {"2", ""}};
  csv::write(dir / "t.csv", t);
  const csv::Table back = csv::read(dir / "t.csv");
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK_FALSE(fs::exists(dir / "t.csv.tmp"));
}

TEST_CASE("svg rendering") {
  svg::Chart c;
  c.title = "a < b & c";
  c.series = {{"one", {{0, 0}, {1, 2}, {2, std::nan("")}}}, {"two", {{0, 1}, {3, 1}}}};
  const std::string doc = svg::render(c);
  CHECK(doc.find("<svg") == 0);
  CHECK(doc.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(doc.find("one") != std::string::npos);
  CHECK(doc.find("nan") == std::string::npos);
  CHECK(doc.rfind("</svg>") != std::string::npos);
}

TEST_CASE("config parsing") {
  const BenchConfig cfg = bench_config_from_json(small_config("o", 2));
  CHECK(cfg.ce->m_min == 2);
  CHECK(cfg.workers == 2);
  REQUIRE(cfg.models.size() == 6);
  CHECK(cfg.models[4].id == "pen+@0.1");
  CHECK(cfg.models[5].id == "pen+@0.001");
  CHECK(cfg.models[5].lambda == 1e-3);
  const auto ids = record_model_ids(cfg.models);
  CHECK(ids == std::vector<std::string>{"mip", "lp", "sdp", "sdp+", "sdp+:misc", "pen+@0.1",
                                        "pen+@0.1:misc", "pen+@0.001", "pen+@0.001:misc"});

  nlohmann::json bad = small_config("o", 1);
  bad["colour"] = "red";
  CHECK_THROWS_AS(bench_config_from_json(bad), std::invalid_argument);
  bad = small_config("o", 1);
  bad["models"].push_back({{"kind", "lp"}});
  CHECK_THROWS_AS(bench_config_from_json(bad), std::invalid_argument);
  bad = small_config("o", 1);
  bad["models"] = {{{"kind", "pen"}, {"lambda", -1.0}}};
  CHECK_THROWS_AS(bench_config_from_json(bad), std::invalid_argument);
  bad = small_config("o", 1);
  bad["models"] = {{{"kind", "lp"}, {"misc_rounds", 1}}};
  CHECK_THROWS_AS(bench_config_from_json(bad), std::invalid_argument);
  bad = small_config("o", 1);
  bad["time_limit"] = 0;
  CHECK_THROWS_AS(bench_config_from_json(bad), std::invalid_argument);
}

TEST_CASE("worker override") {
  ::unsetenv("COMPACTKNAP_WORKERS");
  CHECK(effective_workers(3) == 3);
  CHECK(effective_workers(0) == 1);
  ::setenv("COMPACTKNAP_WORKERS", "5", 1);
  CHECK(effective_workers(3) == 5);
  ::setenv("COMPACTKNAP_WORKERS", "junk", 1);
  CHECK(effective_workers(3) == 3);
  ::unsetenv("COMPACTKNAP_WORKERS");
}

TEST_CASE("instance loading by directory and generator") {
  const fs::path dir = scratch("load");
  write_instance(build_ce(3), dir / "b.json");
  write_instance(build_ce(2), dir / "a.json");
  BenchConfig cfg;
  cfg.directory = dir;
  cfg.generate = GeneratorSpec{2, 12, 7};
  const auto inst = load_instances(cfg);
  REQUIRE(inst.size() == 4);
  CHECK(inst[0].instance == build_ce(2));
  CHECK(inst[1].instance == build_ce(3));
  CHECK(inst[2].id == "gen-n12-s7");
  CHECK(inst[3].id == "gen-n12-s8");
}

TEST_CASE("benchmark records, gaps and determinism") {
  const fs::path a = scratch("bench-a");
  const fs::path b = scratch("bench-b");
  const fs::path c = scratch("bench-c");
  const BenchResult ra = run_benchmark(bench_config_from_json(small_config(a, 1)));
  run_benchmark(bench_config_from_json(small_config(b, 1)));
  run_benchmark(bench_config_from_json(small_config(c, 3)));
  CHECK(untimed(a / "runs.csv") == untimed(b / "runs.csv"));
  CHECK(untimed(a / "runs.csv") == untimed(c / "runs.csv"));

  // 3 instances x 9 record ids.
  REQUIRE(ra.records.size() == 27);
  const auto back = read_records(ra.csv_path);
  REQUIRE(back.size() == ra.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(csv::join(record_fields(back[i])) == csv::join(record_fields(ra.records[i])));
  }

  for (const RunRecord &r : ra.records) {
    CHECK(r.status == "Optimal");
    if (r.model == "mip") {
      CHECK(r.gap_percent == 0.0);
    } else if (r.kind == "pen+") {
      CHECK(std::isnan(r.gap_percent));
      CHECK(!std::isnan(r.lambda));
    } else {
      CHECK(r.gap_percent >= -1e-3);
      CHECK(std::isnan(r.lambda));
    }
    if (r.instance_id == "ce-2" && r.model == "lp") {
      CHECK(r.objective == doctest::Approx(8.0 / 3.0));
      CHECK(r.gap_percent == doctest::Approx(100.0 / 9.0));
    }
    if (r.model.find(":misc") != std::string::npos) {
      CHECK(r.misc_rounds == 1);
    }
  }
}

TEST_CASE("emitted tables") {
  const fs::path dir = scratch("emit");
  const BenchResult res = run_benchmark(bench_config_from_json(small_config(dir, 1)));
  const EmitPaths paths = emit_all(res.records, dir);
  for (const char *name : {"gap_curve.csv", "tradeoff.csv", "fractionality.csv", "profile.csv",
                           "gap_curve.svg", "tradeoff.svg", "fractionality.svg", "profile.svg"}) {
    CHECK(fs::exists(dir / name));
  }
  const csv::Table gc = csv::read(dir / "gap_curve.csv");
  REQUIRE(gc.rows.size() == 3);
  double prev = -1.0;
  for (const auto &row : gc.rows) {
    const double g = csv::to_number(row[gc.column("gap_lp")]);
    CHECK(g >= prev);
    prev = g;
    CHECK(csv::to_number(row[gc.column("gap_sdp_plus")]) <= g + 1e-3);
  }
  const csv::Table fr = csv::read(dir / "fractionality.csv");
  CHECK(fr.has("reduction"));
  const csv::Table pp = csv::read(dir / "profile.csv");
  for (const auto &row : pp.rows) {
    const double f = csv::to_number(row[pp.column("fraction")]);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(plot_table(gc).find("<svg") == 0);
  csv::Table junk;
  junk.header = {"x"};
  CHECK_THROWS_AS(plot_table(junk), std::invalid_argument);
}

TEST_CASE("solution files") {
  const SolutionInput bare = solution_from_json(nlohmann::json::parse(R"(["1/2", 1, "0.25"])"));
  REQUIRE(bare.exact.has_value());
  CHECK((*bare.exact)[0] == Rational(1, 2));
  CHECK(bare.values == std::vector<double>{0.5, 1.0, 0.25});
  const SolutionInput floats = solution_from_json(nlohmann::json::parse(R"({"values": [0.5, 1]})"));
  CHECK_FALSE(floats.exact.has_value());
  const SolutionInput nested = solution_from_json(
      nlohmann::json::parse(R"({"solution": {"values": [1, 0], "X": [[1, 0], [0, 0]]}})"));
  REQUIRE(nested.matrix.has_value());
  CHECK((*nested.matrix)(0, 0) == 1.0);
  CHECK_THROWS(solution_from_json(nlohmann::json::parse(R"({"x": [1]})")));
  CHECK_THROWS(solution_from_json(nlohmann::json::parse(R"([true])")));
  CHECK_THROWS(solution_from_json(
      nlohmann::json::parse(R"({"values": [1, 0], "X": [[1, 0]]})")));
}

TEST_CASE("solve report json") {
  const Instance ce = build_ce(2);
  ModelSpec spec;
  spec.kind = ModelKind::SdpPlus;
  spec.id = "sdp+";
  spec.misc_rounds = 1;
  const ModelOutcome out = run_model(ce, spec, 60.0);
  const nlohmann::json doc = outcome_json(ce, spec, out);
  CHECK(doc.at("status") == "Optimal");
  CHECK(doc.at("triple_window") == 6);
  CHECK(doc.at("rounded").is_array());
  CHECK(doc.at("solution").at("X").size() == 4);
  CHECK(doc.contains("eigenvalues"));
  CHECK(doc.contains("misc"));
  // The report is accepted back as a solution file.
  const SolutionInput back = solution_from_json(doc);
  CHECK(back.values.size() == 4);
  CHECK(back.matrix.has_value());
}
