#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "risopt/harness.hpp"

using namespace risopt;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("risopt_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tiny_scenario_json(const std::string& extra = "") {
  return R"({
  "bandwidth_hz": 1e5,
  "time_s": 1.0,
  "noise_watts": 0.1,
  "n_antennas": 3,
  "n_ris_elements": 6,
  "geometry": {
    "bs": [0, 0],
    "ris": [2, 0],
    "ref_loss_db": 0,
    "alpha_direct": 2.0,
    "alpha_bs_ris": 2.0,
    "alpha_ris_user": 2.0,
    "user_positions": [[1, 1], [1, 2]]
  },
  "tasks": [
    {"name": "a", "c": 0.9, "d": 0.5, "D_bits": 200, "power_watts": 0.5},
    {"name": "b", "c": 0.7, "d": 0.4, "D_bits": 300, "power_watts": 0.5}
  ])" + extra +
         "\n}";
}

}  // namespace

TEST_CASE("format_number round-trips doubles exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(-40.0, 40.0);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = mant(rng) * std::pow(10.0, mag(rng));
    const std::string text = format_number(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
}

TEST_CASE("load_points_csv accepts a header and flags bad rows") {
  const fs::path dir = fresh_dir("csv");
  write_file(dir / "ok.csv", "samples,error\n10,0.5\n20,0.25\n");
  const auto points = load_points_csv(dir / "ok.csv");
  REQUIRE(points.size() == 2);
  CHECK(points[0].first == 10.0);
  CHECK(points[1].second == 0.25);

  write_file(dir / "bad.csv", "10,0.5\nnot,numbers\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_points_csv(dir / "bad.csv")),
                       doctest::Contains("row 2"), ConfigError);

  write_file(dir / "wide.csv", "10,0.5,77\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_points_csv(dir / "wide.csv")),
                       doctest::Contains("row 1"), ConfigError);

  CHECK_THROWS_AS(static_cast<void>(load_points_csv(dir / "missing.csv")),
                  ConfigError);
}

TEST_CASE("config syntax errors carry the line number") {
  const fs::path dir = fresh_dir("syntax");
  write_file(dir / "broken.json", "{\n  \"bandwidth_hz\": 5e6,\n  oops\n}\n");
  CHECK_THROWS_WITH_AS(
      static_cast<void>(load_config(dir / "broken.json", ExperimentKind::solve, {})),
      doctest::Contains("broken.json:3"), ConfigError);
}

TEST_CASE("config semantic errors name the key") {
  const fs::path dir = fresh_dir("semantic");
  write_file(dir / "bad.json", "{\"bandwidth_hz\": -5}\n");
  CHECK_THROWS_WITH_AS(
      static_cast<void>(load_config(dir / "bad.json", ExperimentKind::solve, {})),
      doctest::Contains("bandwidth_hz"), ConfigError);

  write_file(dir / "bad_task.json", "{\"tasks\": [{\"c\": -1, \"d\": 0.5}]}\n");
  CHECK_THROWS_AS(
      static_cast<void>(load_config(dir / "bad_task.json", ExperimentKind::solve, {})),
      ConfigError);
}

TEST_CASE("default config mirrors the shipped scenario") {
  const RunConfig config = default_config(ExperimentKind::solve, {});
  CHECK(config.scenario.cfg.bandwidth_hz == 5e6);
  CHECK(config.scenario.cfg.time_s == 10.0);
  CHECK(config.scenario.cfg.noise_watts ==
        doctest::Approx(std::pow(10.0, -10.7)).epsilon(1e-12));
  CHECK(config.scenario.cfg.n_antennas == 10);
  CHECK(config.scenario.cfg.n_elements == 50);
  REQUIRE(config.scenario.tasks.size() == 4);
  CHECK(config.scenario.tasks[0].name == "svm");
  CHECK(config.scenario.geometry.user_pos.size() == 4);
}

TEST_CASE("cli overrides beat config values") {
  const fs::path dir = fresh_dir("override");
  write_file(dir / "c.json", tiny_scenario_json(",\n  \"seed\": 9, \"trials\": 2"));
  CliOverrides overrides;
  overrides.seed = 123;
  overrides.trials = 1;
  overrides.els_tol = 0.5;
  const RunConfig config = load_config(dir / "c.json", ExperimentKind::solve, overrides);
  CHECK(config.seed == 123);
  CHECK(config.scenario.seed == 123);
  CHECK(config.trials == 1);
  CHECK(config.ao.els.els_tol == 0.5);
}

TEST_CASE("solve run is deterministic byte for byte") {
  const fs::path dir = fresh_dir("determinism");
  write_file(dir / "c.json", tiny_scenario_json());
  CliOverrides overrides;
  overrides.trials = 2;
  RunConfig config = load_config(dir / "c.json", ExperimentKind::solve, overrides);

  config.out_dir = dir / "run1";
  run(config);
  config.out_dir = dir / "run2";
  run(config);
  CHECK(read_file(dir / "run1/summary.csv") == read_file(dir / "run2/summary.csv"));
  CHECK(read_file(dir / "run1/traces.csv") == read_file(dir / "run2/traces.csv"));
  CHECK(read_file(dir / "run1/results.json") == read_file(dir / "run2/results.json"));
  CHECK(!read_file(dir / "run1/summary.csv").empty());
}

TEST_CASE("parallel trials produce identical outputs") {
  const fs::path dir = fresh_dir("jobs");
  write_file(dir / "c.json", tiny_scenario_json(",\n  \"antenna_counts\": [3, 4]"));
  CliOverrides overrides;
  overrides.trials = 2;
  RunConfig config = load_config(dir / "c.json", ExperimentKind::benchmark, overrides);

  config.jobs = 1;
  config.out_dir = dir / "serial";
  run(config);
  config.jobs = 2;
  config.out_dir = dir / "parallel";
  run(config);
  CHECK(read_file(dir / "serial/summary.csv") ==
        read_file(dir / "parallel/summary.csv"));
  CHECK(read_file(dir / "serial/traces.csv") == read_file(dir / "parallel/traces.csv"));

  // Benchmark summary covers all four schemes at both antenna counts.
  const std::string summary = read_file(dir / "serial/summary.csv");
  for (const std::string scheme : {"proposed", "no_ris", "random_phase", "sum_rate"}) {
    CHECK(summary.find(scheme) != std::string::npos);
  }
}

TEST_CASE("traces carry ao, els and admm rows that parse back") {
  const fs::path dir = fresh_dir("traces");
  write_file(dir / "c.json", tiny_scenario_json());
  RunConfig config = load_config(dir / "c.json", ExperimentKind::convergence, {});
  config.out_dir = dir / "out";
  run(config);
  const std::string traces = read_file(dir / "out/traces.csv");
  CHECK(traces.find(",ao,") != std::string::npos);
  CHECK(traces.find(",els,") != std::string::npos);
  CHECK(traces.find(",admm,") != std::string::npos);

  // Every numeric field round-trips through strtod.
  std::istringstream lines(traces);
  std::string line;
  std::getline(lines, line);  // header
  int numeric_fields = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      if (field.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() && *end == '\0') {
        CHECK(format_number(v) == format_number(std::strtod(
                                      format_number(v).c_str(), nullptr)));
        ++numeric_fields;
      }
    }
  }
  CHECK(numeric_fields > 50);
}

TEST_CASE("channel dump file is written when requested") {
  const fs::path dir = fresh_dir("dump");
  write_file(dir / "c.json", tiny_scenario_json());
  CliOverrides overrides;
  overrides.channel_dump = dir / "channels.jsonl";
  overrides.trials = 2;
  RunConfig config = load_config(dir / "c.json", ExperimentKind::solve, overrides);
  config.out_dir = dir / "out";
  run(config);
  const std::string dump = read_file(dir / "channels.jsonl");
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 2);
  CHECK(dump.find("\"h_direct\"") != std::string::npos);
}

TEST_CASE("fit experiment recovers parameters from an exact curve") {
  const fs::path dir = fresh_dir("fit");
  std::ostringstream csv;
  csv << "samples,error\n";
  const TaskProfile mnist = preset_task_profiles()[1];  // (10.79, 0.73)
  for (double v : {100.0, 150.0, 200.0, 300.0, 500.0, 1000.0, 3000.0, 10000.0}) {
    csv << format_number(v) << "," << format_number(error(v, mnist)) << "\n";
  }
  write_file(dir / "points.csv", csv.str());

  CliOverrides overrides;
  overrides.points_csv = dir / "points.csv";
  RunConfig config = default_config(ExperimentKind::fit, overrides);
  config.out_dir = dir / "out";
  run(config);

  const std::string summary = read_file(dir / "out/summary.csv");
  std::istringstream lines(summary);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  const auto comma = row.find(',');
  const double c = std::strtod(row.substr(0, comma).c_str(), nullptr);
  const double d = std::strtod(row.substr(comma + 1).c_str(), nullptr);
  CHECK(c == doctest::Approx(10.79).epsilon(1e-6));
  CHECK(d == doctest::Approx(0.73).epsilon(1e-6));

  // A single-row file cannot be fitted.
  write_file(dir / "one.csv", "10,0.5\n");
  overrides.points_csv = dir / "one.csv";
  RunConfig bad = default_config(ExperimentKind::fit, overrides);
  bad.out_dir = dir / "out2";
  CHECK_THROWS_AS(run(bad), DomainError);
}

TEST_CASE("solve on the shipped default scenario yields a monotone trace") {
  const fs::path dir = fresh_dir("default_solve");
  RunConfig config = default_config(ExperimentKind::solve, {});
  config.out_dir = dir / "out";
  run(config);

  std::ifstream in(dir / "out" / "results.json");
  REQUIRE(in.good());
  nlohmann::json results;
  in >> results;
  REQUIRE(results.is_array());
  REQUIRE(results.size() == 1);
  const auto& trace = results[0].at("trace");
  REQUIRE(trace.size() >= 2);
  for (std::size_t t = 1; t < trace.size(); ++t) {
    CHECK(trace[t].get<double>() <= trace[t - 1].get<double>() + 1e-9);
  }
  CHECK(results[0].at("per_task").size() == 4);
}
