#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risopt/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  risopt::CliOverrides overrides;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Scenario/experiment config (JSON)");
  cmd->add_option("--seed", args.overrides.seed, "Root seed");
  cmd->add_option("--trials", args.overrides.trials, "Number of Monte-Carlo trials");
  cmd->add_option("--jobs", args.overrides.jobs, "Parallel trial workers");
  cmd->add_option("--out", args.overrides.out_dir, "Output directory");
  cmd->add_option("--rho", args.overrides.rho, "ADMM penalty parameter");
  cmd->add_option("--ao-tol", args.overrides.ao_tol,
                  "Alternating-optimization stop tolerance");
  cmd->add_option("--els-tol", args.overrides.els_tol,
                  "Error-level-search relative tolerance");
}

int run_kind(risopt::ExperimentKind kind, const CommonArgs& args) {
  risopt::RunConfig config =
      args.config_path.empty()
          ? risopt::default_config(kind, args.overrides)
          : risopt::load_config(args.config_path, kind, args.overrides);
  risopt::run(config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted learning-centric link optimizer"};
  app.require_subcommand(1);

  CommonArgs solve_args, bench_args, conv_args, scaling_args, fit_args;
  auto* solve = app.add_subcommand("solve", "Optimize one scenario");
  add_common_options(solve, solve_args);
  solve->add_option("--dump-channels", solve_args.overrides.channel_dump,
                    "Write per-trial channel realizations to this file");

  auto* bench = app.add_subcommand("benchmark", "Compare against baselines");
  add_common_options(bench, bench_args);
  auto* conv = app.add_subcommand("convergence", "Record solver traces");
  add_common_options(conv, conv_args);
  auto* scaling = app.add_subcommand("scaling", "RIS-size scaling law");
  add_common_options(scaling, scaling_args);
  auto* fit = app.add_subcommand("fit", "Fit the error model to observations");
  add_common_options(fit, fit_args);
  fit->add_option("--points", fit_args.overrides.points_csv,
                  "CSV of (sample_size, test_error) rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    using risopt::ExperimentKind;
    if (solve->parsed()) return run_kind(ExperimentKind::solve, solve_args);
    if (bench->parsed()) return run_kind(ExperimentKind::benchmark, bench_args);
    if (conv->parsed()) return run_kind(ExperimentKind::convergence, conv_args);
    if (scaling->parsed()) return run_kind(ExperimentKind::scaling, scaling_args);
    if (fit->parsed()) return run_kind(ExperimentKind::fit, fit_args);
  } catch (const risopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
