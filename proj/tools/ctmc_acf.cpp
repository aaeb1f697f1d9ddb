#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctmc_acf/cli.hpp"

int main(int argc, char** argv) {
  using ctmc::cli::Command;
  ctmc::cli::RunConfig cfg;
  double horizon = 0.0;
  std::vector<CLI::Option*> horizon_options;

  CLI::App app{"Autocorrelation analysis of finite-state continuous-time Markov chains"};
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* sub) { sub->add_option("--model", cfg.model_path, "Model JSON file")->required(); };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--tau-start", cfg.tau_start, "First lag")->capture_default_str();
    sub->add_option("--tau-stop", cfg.tau_stop, "Last lag")->capture_default_str();
    sub->add_option("--tau-count", cfg.tau_count, "Number of grid points")->capture_default_str();
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n_trajectories, "Number of trajectories")->capture_default_str();
    horizon_options.push_back(sub->add_option("--horizon", horizon, "Trajectory horizon (default: max lag + longest mean sojourn)"));
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "Output file (default: stdout)"); };

  auto* validate = app.add_subcommand("validate", "Check a model and print its stationary law and spectrum");
  add_model(validate);
  validate->add_flag("--echo-json", cfg.echo_json, "Print the parsed model as JSON");

  auto* analyze = app.add_subcommand("analyze", "Exponential-mixture form and L^p classification of R(tau)");
  add_model(analyze);
  analyze->add_option("--p", cfg.p_list, "Exponent p >= 1 (repeatable)")->capture_default_str();
  add_out(analyze);

  auto* grid = app.add_subcommand("acf-grid", "Exact R(tau) on a lag grid as CSV");
  add_model(grid);
  add_grid(grid);
  grid->add_flag("--compare-sim", cfg.compare_sim, "Append Monte Carlo estimate columns");
  add_sim(grid);
  add_out(grid);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo R(tau) estimates as CSV");
  add_model(simulate);
  add_grid(simulate);
  add_sim(simulate);
  add_out(simulate);

  auto* pointproc = app.add_subcommand("pointproc", "Arrival attribution probabilities");
  add_model(pointproc);
  pointproc->add_option("--i", cfg.i, "Initial state (one-based)")->capture_default_str();
  pointproc->add_option("--j", cfg.j, "Arrival stream (one-based)")->capture_default_str();
  pointproc->add_option("--tau", cfg.tau, "Lag")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.command = *ctmc::cli::parse_command(chosen->get_name());
  for (const auto* opt : horizon_options)
    if (opt->count() > 0) cfg.horizon = horizon;
  return ctmc::cli::run(cfg);
}
