#include "risopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "risopt/parallel.hpp"
#include "risopt/rng.hpp"

namespace risopt {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrialSalt = 0x747269616cULL;

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double require_positive(double value, const std::string& key) {
  if (!(value > 0.0)) config_fail(key, "must be > 0");
  return value;
}

double get_num(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) config_fail(key, "expected a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) config_fail(key, "expected an integer");
  return j.at(key).get<int>();
}

Eigen::Vector2d get_point(const json& j, const std::string& key,
                          const Eigen::Vector2d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 2) config_fail(key, "expected [x, y]");
  return {arr[0].get<double>(), arr[1].get<double>()};
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::vector<TaskProfile> parse_tasks(const json& j) {
  if (!j.contains("tasks")) return preset_task_profiles();
  const auto& arr = j.at("tasks");
  if (!arr.is_array() || arr.empty()) config_fail("tasks", "expected a non-empty array");
  std::vector<TaskProfile> tasks;
  tasks.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& t = arr[i];
    const std::string where = "tasks[" + std::to_string(i) + "]";
    TaskProfile task;
    task.name = t.contains("name") ? t.at("name").get<std::string>()
                                   : "task_" + std::to_string(i);
    task.c = require_positive(get_num(t, "c", 0.0), where + ".c");
    task.d = require_positive(get_num(t, "d", 0.0), where + ".d");
    task.bits_per_sample = get_num(t, "D_bits", 0.0);
    if (!(task.bits_per_sample >= 1.0)) config_fail(where + ".D_bits", "must be >= 1");
    task.power_watts =
        require_positive(get_num(t, "power_watts", 0.1), where + ".power_watts");
    tasks.push_back(std::move(task));
  }
  return tasks;
}

Geometry parse_geometry(const json& j, int n_users, std::uint64_t seed) {
  Geometry base = default_geometry(n_users, seed);
  if (!j.contains("geometry")) return base;
  const auto& g = j.at("geometry");
  base.bs_pos = get_point(g, "bs", base.bs_pos);
  base.ris_pos = get_point(g, "ris", base.ris_pos);
  base.alpha_direct = require_positive(
      get_num(g, "alpha_direct", base.alpha_direct), "geometry.alpha_direct");
  base.alpha_bs_ris = require_positive(
      get_num(g, "alpha_bs_ris", base.alpha_bs_ris), "geometry.alpha_bs_ris");
  base.alpha_ris_user = require_positive(
      get_num(g, "alpha_ris_user", base.alpha_ris_user), "geometry.alpha_ris_user");
  base.ref_distance_m = require_positive(
      get_num(g, "ref_distance_m", base.ref_distance_m), "geometry.ref_distance_m");
  base.ref_loss_db = get_num(g, "ref_loss_db", base.ref_loss_db);
  if (g.contains("user_positions")) {
    const auto& arr = g.at("user_positions");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n_users) {
      config_fail("geometry.user_positions",
                  "expected " + std::to_string(n_users) + " [x, y] pairs");
    }
    base.user_pos.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      base.user_pos.emplace_back(arr[i][0].get<double>(), arr[i][1].get<double>());
    }
  }
  return base;
}

TaskProfile parse_scaling_task(const json& j) {
  if (j.contains("task") && j.at("task").is_object()) {
    const auto& t = j.at("task");
    TaskProfile task;
    task.name = t.contains("name") ? t.at("name").get<std::string>() : "scaling";
    task.c = require_positive(get_num(t, "c", 0.0), "scaling.task.c");
    task.d = require_positive(get_num(t, "d", 0.0), "scaling.task.d");
    task.bits_per_sample = get_num(t, "D_bits", 1.0);
    return task;
  }
  const std::string name =
      j.contains("task_name") ? j.at("task_name").get<std::string>() : "svm";
  for (auto& task : preset_task_profiles()) {
    if (task.name == name) return task;
  }
  config_fail("task_name", "unknown task '" + name + "'");
}

RunConfig parse_run_config(const json& j, ExperimentKind kind,
                           const std::filesystem::path& base_dir,
                           const CliOverrides& overrides) {
  RunConfig config;
  config.kind = kind;
  config.seed = overrides.seed.value_or(
      static_cast<std::uint64_t>(get_num(j, "seed", 1.0)));
  config.trials = overrides.trials.value_or(get_int(j, "trials", 1));
  if (config.trials < 1) config_fail("trials", "must be >= 1");
  config.jobs = overrides.jobs.value_or(get_int(j, "jobs", 1));
  if (config.jobs < 1) config_fail("jobs", "must be >= 1");
  config.out_dir = overrides.out_dir.value_or(
      base_dir / j.value("out_dir", std::string("out")));

  SystemConfig& cfg = config.scenario.cfg;
  cfg.bandwidth_hz = require_positive(get_num(j, "bandwidth_hz", 5e6), "bandwidth_hz");
  cfg.time_s = require_positive(get_num(j, "time_s", 10.0), "time_s");
  if (j.contains("noise_watts")) {
    cfg.noise_watts = require_positive(get_num(j, "noise_watts", 0.0), "noise_watts");
  } else {
    cfg.noise_watts = dbm_to_watts(get_num(j, "noise_dbm", -77.0));
  }
  cfg.n_antennas = get_int(j, "n_antennas", 10);
  cfg.n_elements = get_int(j, "n_ris_elements", 50);
  if (cfg.n_antennas < 1) config_fail("n_antennas", "must be >= 1");
  if (cfg.n_elements < 1) config_fail("n_ris_elements", "must be >= 1");

  config.scenario.tasks = parse_tasks(j);
  cfg.n_users = static_cast<int>(config.scenario.tasks.size());
  config.scenario.seed = config.seed;
  config.scenario.geometry = parse_geometry(j, cfg.n_users, config.seed);

  if (j.contains("antenna_counts")) {
    const auto& arr = j.at("antenna_counts");
    if (!arr.is_array() || arr.empty()) config_fail("antenna_counts", "expected an array");
    for (const auto& v : arr) {
      const int n = v.get<int>();
      if (n < 1) config_fail("antenna_counts", "entries must be >= 1");
      config.antenna_counts.push_back(n);
    }
  }

  ScalingParams& sc = config.scaling;
  sc.task = parse_scaling_task(j);
  if (j.contains("m_values")) {
    sc.m_values.clear();
    for (const auto& v : j.at("m_values")) sc.m_values.push_back(v.get<int>());
    if (sc.m_values.empty()) config_fail("m_values", "expected a non-empty array");
  }
  sc.power_watts = require_positive(get_num(j, "scaling_power_watts", 1.0),
                                    "scaling_power_watts");
  sc.noise_watts = require_positive(get_num(j, "scaling_noise_watts", 1.0),
                                    "scaling_noise_watts");
  sc.var_h = require_positive(get_num(j, "var_h", 1.0), "var_h");
  sc.var_g = require_positive(get_num(j, "var_g", 1.0), "var_g");

  if (overrides.points_csv) {
    config.points_csv = *overrides.points_csv;
  } else if (j.contains("points_csv")) {
    config.points_csv = base_dir / j.at("points_csv").get<std::string>();
  }
  if (overrides.channel_dump) config.channel_dump = *overrides.channel_dump;

  AoOptions& ao = config.ao;
  ao.ao_tol = require_positive(get_num(j, "ao_tol", ao.ao_tol), "ao_tol");
  ao.max_iter = get_int(j, "ao_max_iter", ao.max_iter);
  ao.els.els_tol = require_positive(get_num(j, "els_tol", ao.els.els_tol), "els_tol");
  ao.els.admm.rho = require_positive(get_num(j, "rho", ao.els.admm.rho), "rho");
  ao.els.admm.tol =
      require_positive(get_num(j, "admm_tol", ao.els.admm.tol), "admm_tol");
  ao.els.admm.max_iter = get_int(j, "admm_max_iter", ao.els.admm.max_iter);
  if (overrides.rho) ao.els.admm.rho = require_positive(*overrides.rho, "--rho");
  if (overrides.ao_tol) ao.ao_tol = require_positive(*overrides.ao_tol, "--ao-tol");
  if (overrides.els_tol) {
    ao.els.els_tol = require_positive(*overrides.els_tol, "--els-tol");
  }
  return config;
}

json solution_to_json(const Solution& sol, const std::vector<TaskProfile>& tasks) {
  auto cvec_to_json = [](const CVec& v) {
    json arr = json::array();
    for (Eigen::Index j = 0; j < v.size(); ++j) arr.push_back({v[j].real(), v[j].imag()});
    return arr;
  };
  json per_task = json::array();
  for (std::size_t k = 0; k < sol.tasks.size(); ++k) {
    per_task.push_back({{"name", tasks[k].name},
                        {"sinr", sol.tasks[k].sinr},
                        {"rate_bps_hz", sol.tasks[k].rate_bps_hz},
                        {"samples", sol.tasks[k].samples},
                        {"error", sol.tasks[k].error}});
  }
  json beams = json::array();
  for (const auto& w : sol.beamformers.w) beams.push_back(cvec_to_json(w));
  // wall_time_s stays out: results.json must be a pure function of the config.
  return {{"objective", sol.objective},
          {"per_task", per_task},
          {"theta", cvec_to_json(sol.theta.vec())},
          {"beamformers", beams},
          {"trace", sol.trace}};
}

struct TraceTable {
  int n_tasks = 0;
  std::vector<std::string> rows;

  std::string header() const {
    std::string h =
        "trial,scheme,n_antennas,kind,ao_iter,els_step,admm_iter,objective,delta,"
        "feasible,admm_iters,primal_residual";
    for (int k = 1; k <= n_tasks; ++k) h += ",err_" + std::to_string(k);
    for (int k = 1; k <= n_tasks; ++k) h += ",sinr_" + std::to_string(k);
    return h;
  }
};

void append_solution_rows(TraceTable& table, int trial, const std::string& scheme,
                          int n_antennas, const Solution& sol) {
  const std::string prefix = std::to_string(trial) + "," + scheme + "," +
                             std::to_string(n_antennas) + ",";
  const std::string task_blanks(static_cast<std::size_t>(table.n_tasks), ',');
  for (std::size_t t = 0; t < sol.trace.size(); ++t) {
    std::string row = prefix + "ao," + std::to_string(t) + ",,," +
                      format_number(sol.trace[t]) + ",,,,";
    if (t + 1 == sol.trace.size()) {
      for (const auto& task : sol.tasks) row += "," + format_number(task.error);
    } else {
      row += task_blanks;
    }
    row += task_blanks;
    table.rows.push_back(std::move(row));
  }
  for (std::size_t iter = 0; iter < sol.els_steps.size(); ++iter) {
    for (std::size_t step = 0; step < sol.els_steps[iter].size(); ++step) {
      const auto& rec = sol.els_steps[iter][step];
      table.rows.push_back(prefix + "els," + std::to_string(iter + 1) + "," +
                           std::to_string(step) + ",,," + format_number(rec.delta) +
                           "," + (rec.feasible ? "1" : "0") + "," +
                           std::to_string(rec.admm_iters) + "," + task_blanks +
                           task_blanks);
    }
  }
  const int last_ao = static_cast<int>(sol.els_steps.size());
  for (const auto& rec : sol.admm_trace) {
    std::string row = prefix + "admm," + std::to_string(last_ao) + ",," +
                      std::to_string(rec.iter) + ",,," +
                      (rec.feasible ? "1" : "0") + ",," +
                      format_number(rec.primal_residual) + task_blanks;
    for (const auto& s : rec.sinr) row += "," + format_number(s);
    table.rows.push_back(std::move(row));
  }
}

struct SummaryAccumulator {
  std::vector<double> objectives;

  void add(double v) { objectives.push_back(v); }

  std::string stats() const {
    std::vector<double> sorted = objectives;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    const double median = n % 2 == 1 ? sorted[n / 2]
                                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return format_number(mean) + "," + format_number(median) + "," +
           format_number(sorted.front()) + "," + format_number(sorted.back());
  }
};

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file " + path.string());
  out << body;
}

void write_lines(const std::filesystem::path& path,
                 const std::string& header, const std::vector<std::string>& rows) {
  std::string body = header + "\n";
  for (const auto& r : rows) body += r + "\n";
  write_text_file(path, body);
}

Scenario trial_scenario(const RunConfig& config, int trial) {
  Scenario s = config.scenario;
  s.seed = derive_seed(derive_seed(config.seed, kTrialSalt), static_cast<std::uint64_t>(trial));
  return s;
}

void run_solve_like(const RunConfig& config, bool benchmark) {
  const std::vector<int> antenna_counts =
      benchmark && !config.antenna_counts.empty()
          ? config.antenna_counts
          : std::vector<int>{config.scenario.cfg.n_antennas};
  const std::vector<BaselineKind> baselines =
      benchmark ? std::vector<BaselineKind>{BaselineKind::no_ris,
                                            BaselineKind::random_phase,
                                            BaselineKind::sum_rate}
                : std::vector<BaselineKind>{};

  struct Cell {
    int n_antennas = 0;
    int trial = 0;
    std::vector<std::pair<std::string, Solution>> solutions;
    std::string channel_record;
  };
  const int total = static_cast<int>(antenna_counts.size()) * config.trials;
  std::vector<Cell> cells(static_cast<std::size_t>(total));

  parallel_for(config.jobs, total, [&](int idx) {
    const int n_idx = idx / config.trials;
    const int trial = idx % config.trials;
    Scenario scenario = trial_scenario(config, trial);
    scenario.cfg.n_antennas = antenna_counts[static_cast<std::size_t>(n_idx)];
    const ChannelSet ch = scenario_channels(scenario);

    Cell& cell = cells[static_cast<std::size_t>(idx)];
    cell.n_antennas = scenario.cfg.n_antennas;
    cell.trial = trial;
    cell.solutions.emplace_back("proposed",
                                alternating_optimize(scenario, ch, config.ao));
    for (BaselineKind kind : baselines) {
      cell.solutions.emplace_back(to_string(kind),
                                  run_baseline(scenario, ch, kind, config.ao));
    }
    if (config.channel_dump) {
      std::ostringstream rec;
      dump_channels(rec, ch, scenario.geometry,
                    {scenario.cfg.n_antennas, scenario.cfg.n_elements,
                     scenario.cfg.n_users},
                    scenario.seed);
      cell.channel_record = rec.str();
    }
  });

  json results = json::array();
  TraceTable traces;
  traces.n_tasks = static_cast<int>(config.scenario.tasks.size());
  std::map<std::pair<int, std::string>, SummaryAccumulator> summary;
  std::string dump_body;
  for (const auto& cell : cells) {
    for (const auto& [scheme, sol] : cell.solutions) {
      json rec = solution_to_json(sol, config.scenario.tasks);
      rec["trial"] = cell.trial;
      rec["scheme"] = scheme;
      rec["n_antennas"] = cell.n_antennas;
      results.push_back(std::move(rec));
      append_solution_rows(traces, cell.trial, scheme, cell.n_antennas, sol);
      summary[{cell.n_antennas, scheme}].add(sol.objective);
    }
    dump_body += cell.channel_record;
  }

  double solver_time = 0.0;
  for (const auto& cell : cells) {
    for (const auto& [scheme, sol] : cell.solutions) solver_time += sol.wall_time_s;
  }
  std::cout << "wrote " << (config.out_dir / "results.json").string() << " ("
            << results.size() << " solutions, " << format_number(solver_time)
            << " s solver time)\n";

  write_text_file(config.out_dir / "results.json", results.dump(2) + "\n");
  write_lines(config.out_dir / "traces.csv", traces.header(), traces.rows);
  std::vector<std::string> summary_rows;
  for (const auto& [key, acc] : summary) {
    summary_rows.push_back(key.second + "," + std::to_string(key.first) + "," +
                           std::to_string(config.trials) + "," + acc.stats());
  }
  write_lines(config.out_dir / "summary.csv",
              "scheme,n_antennas,trials,objective_mean,objective_median,"
              "objective_min,objective_max",
              summary_rows);
  if (config.channel_dump) write_text_file(*config.channel_dump, dump_body);
}

void run_scaling(const RunConfig& config) {
  const ScalingParams& sc = config.scaling;
  const auto points =
      scaling_law_experiment(sc.m_values, config.trials, sc.power_watts,
                             sc.noise_watts, sc.var_h, sc.var_g, config.seed);
  const auto fit =
      scaling_error_fit(sc.m_values, config.trials, sc.task, config.scenario.cfg,
                        sc.power_watts, sc.noise_watts, sc.var_h, sc.var_g,
                        config.seed);

  json table = json::array();
  std::vector<std::string> summary_rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double theory = points[i].m * sc.power_watts * sc.var_h * sc.var_g /
                          sc.noise_watts;
    table.push_back({{"m", points[i].m},
                     {"mean_snr", points[i].mean_snr},
                     {"theory_snr", theory},
                     {"mean_error", fit.mean_error[i]}});
    summary_rows.push_back(std::to_string(points[i].m) + "," +
                           std::to_string(config.trials) + "," +
                           format_number(points[i].mean_snr) + "," +
                           format_number(theory) + "," +
                           format_number(points[i].mean_snr / theory) + "," +
                           format_number(fit.mean_error[i]));
  }
  json results = {{"points", table},
                  {"fit", {{"r_squared", fit.r_squared},
                           {"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"task", sc.task.name}}}};
  write_text_file(config.out_dir / "results.json", results.dump(2) + "\n");
  write_lines(config.out_dir / "traces.csv",
              "m,trials,mean_snr,theory_snr,ratio,mean_error", {});
  write_lines(config.out_dir / "summary.csv",
              "m,trials,mean_snr,theory_snr,ratio,mean_error", summary_rows);
}

void run_fit(const RunConfig& config) {
  if (config.points_csv.empty()) {
    config_fail("points_csv", "fit experiment needs a points file");
  }
  const auto points = load_points_csv(config.points_csv);
  const FitResult fit = fit_error_model(points);
  std::cout << "c = " << format_number(fit.c) << "\n"
            << "d = " << format_number(fit.d) << "\n";
  json pts = json::array();
  for (const auto& [v, e] : points) pts.push_back({v, e});
  json results = {{"c", fit.c}, {"d", fit.d}, {"points", pts}};
  write_text_file(config.out_dir / "results.json", results.dump(2) + "\n");
  write_lines(config.out_dir / "traces.csv", "samples,error", {});
  write_lines(config.out_dir / "summary.csv", "c,d",
              {format_number(fit.c) + "," + format_number(fit.d)});
}

}  // namespace

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "solve") return ExperimentKind::solve;
  if (name == "benchmark") return ExperimentKind::benchmark;
  if (name == "convergence") return ExperimentKind::convergence;
  if (name == "scaling") return ExperimentKind::scaling;
  if (name == "fit") return ExperimentKind::fit;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::benchmark: return "benchmark";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::fit: return "fit";
  }
  return "unknown";
}

RunConfig load_config(const std::filesystem::path& path, ExperimentKind kind,
                      const CliOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
  try {
    return parse_run_config(j, kind, path.parent_path(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig default_config(ExperimentKind kind, const CliOverrides& overrides) {
  return parse_run_config(json::object(), kind, std::filesystem::current_path(),
                          overrides);
}

void run(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  switch (config.kind) {
    case ExperimentKind::solve:
    case ExperimentKind::convergence:
      run_solve_like(config, /*benchmark=*/false);
      break;
    case ExperimentKind::benchmark:
      run_solve_like(config, /*benchmark=*/true);
      break;
    case ExperimentKind::scaling:
      run_scaling(config);
      break;
    case ExperimentKind::fit:
      run_fit(config);
      break;
  }
}

std::vector<std::pair<double, double>> load_points_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file " + path.string());
  std::vector<std::pair<double, double>> points;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double v = 0.0, e = 0.0;
    if (!(fields >> v >> e)) {
      if (row == 1) continue;  // header
      throw ConfigError(path.string() + ": row " + std::to_string(row) +
                        ": expected 'samples,error'");
    }
    std::string extra;
    if (fields >> extra) {
      throw ConfigError(path.string() + ": row " + std::to_string(row) +
                        ": too many fields");
    }
    points.emplace_back(v, e);
  }
  return points;
}

std::string format_number(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

}  // namespace risopt
