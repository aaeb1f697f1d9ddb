#ifndef CTMC_ACF_CLI_HPP
#define CTMC_ACF_CLI_HPP

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "acf.hpp"
#include "error.hpp"
#include "io.hpp"
#include "lpnorm.hpp"
#include "model.hpp"
#include "pointproc.hpp"
#include "simulate.hpp"
#include "spectral.hpp"

namespace ctmc::cli {

enum class Command { Validate, Analyze, AcfGrid, Simulate, PointProc };

struct RunConfig {
  Command command = Command::Validate;
  std::string model_path;
  double tau_start = 0.0;
  double tau_stop = 1.0;
  std::size_t tau_count = 11;
  std::vector<double> p_list{1.0, 2.0, 3.0};
  std::size_t n_trajectories = 10000;
  std::optional<double> horizon;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_path;  // empty: stdout
  // validate
  bool echo_json = false;
  // acf-grid
  bool compare_sim = false;
  // pointproc, one-based state indices
  std::size_t i = 1;
  std::size_t j = 1;
  double tau = 1.0;
};

inline std::optional<Command> parse_command(const std::string& name) {
  if (name == "validate") return Command::Validate;
  if (name == "analyze") return Command::Analyze;
  if (name == "acf-grid") return Command::AcfGrid;
  if (name == "simulate") return Command::Simulate;
  if (name == "pointproc") return Command::PointProc;
  return std::nullopt;
}

inline std::vector<double> tau_grid(const RunConfig& cfg) {
  if (cfg.tau_count < 2) throw Error(Errc::InvalidArgument, "--tau-count must be >= 2");
  if (!(cfg.tau_start >= 0.0) || !(cfg.tau_stop > cfg.tau_start))
    throw Error(Errc::InvalidArgument, "need 0 <= --tau-start < --tau-stop");
  std::vector<double> grid(cfg.tau_count);
  const double step = (cfg.tau_stop - cfg.tau_start) / double(cfg.tau_count - 1);
  for (std::size_t k = 0; k < cfg.tau_count; ++k) grid[k] = cfg.tau_start + step * double(k);
  grid.back() = cfg.tau_stop;
  return grid;
}

namespace detail {

using ctmc::detail::g17;

inline std::string complex_str(const Complex& z) {
  return g17(z.real()) + (z.imag() < 0.0 ? "-" : "+") + g17(std::abs(z.imag())) + "i";
}

inline double default_horizon(const GeneratorMatrix& gen, double max_lag) {
  return max_lag + 1.0 / (-gen.rates().diagonal()).minCoeff();
}

inline EmpiricalAcf run_simulation(const RunConfig& cfg, const Model& model, const std::vector<double>& lags) {
  if (cfg.n_trajectories < 1) throw Error(Errc::InvalidArgument, "--n must be >= 1");
  const double horizon = cfg.horizon.value_or(default_horizon(model.generator, lags.back()));
  return empirical_acf(model.generator, model.initial(), lags, cfg.n_trajectories, horizon, cfg.seed, cfg.threads);
}

/// Writes to --out when given, else to `fallback`.
template <class Fn>
void emit(const RunConfig& cfg, std::ostream& fallback, Fn&& body) {
  if (cfg.out_path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw Error(Errc::InvalidArgument, "cannot open output file " + cfg.out_path);
  body(file);
}

inline void run_validate(const RunConfig& cfg, const Model& model, std::ostream& out, std::ostream& err) {
  if (cfg.echo_json) {
    out << to_json(model).dump() << '\n';
    return;
  }
  const auto& gen = model.generator;
  out << "N " << gen.size() << '\n';
  out << "states";
  for (double s : gen.states().values()) out << ' ' << g17(s);
  out << "\nstationary";
  const ProbVector pi = stationary_distribution(gen);
  for (std::size_t i = 0; i < pi.size(); ++i) out << ' ' << g17(pi[i]);
  out << '\n';
  try {
    const auto decomp = decompose(gen);
    out << "eigenvalues";
    for (const auto& g : decomp.eigenvalues) out << ' ' << complex_str(g);
    out << '\n';
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSpectrum) throw;
    out << "eigenvalues unavailable: DegenerateSpectrum (" << e.detail() << ")\n";
    err << "WARNING DegenerateSpectrum: " << e.detail() << '\n';
  }
}

inline void run_analyze(const RunConfig& cfg, const Model& model, std::ostream& out, std::ostream& err) {
  const auto& gen = model.generator;
  const ProbVector initial = model.initial();
  try {
    const ExpMixture mixture = acf_mixture(gen, initial);
    out << "c " << g17(mixture.constant_c) << '\n';
    for (const auto& t : mixture.terms) out << "term " << complex_str(t.rate) << ' ' << complex_str(t.weight) << '\n';
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSpectrum) throw;
    out << "c " << g17(constant_term(gen, initial)) << '\n';
    out << "terms unavailable: DegenerateSpectrum\n";
    err << "WARNING DegenerateSpectrum: " << e.detail() << "; using uniformization grid\n";
  }
  const LpReport report = classify(gen, initial, cfg.p_list);
  const std::string json = to_json(report).dump();
  out << "lp_report " << json << '\n';
  if (!cfg.out_path.empty()) emit(cfg, out, [&](std::ostream& os) { os << json << '\n'; });

  if (zero_mean_nonuniform_equilibrium(gen))
    out << "note: stationary mean is zero with a non-uniform stationary law (c = 0 without uniform equilibrium)\n";

  if (is_unit_chain(gen) && model.initial_kind == InitialKind::Stationary) {
    const bool plus_first = gen.states()[0] == 1.0;
    const double alpha = plus_first ? gen(0, 1) : gen(1, 0);
    const double beta = plus_first ? gen(1, 0) : gen(0, 1);
    const double c = std::pow((alpha - beta) / (alpha + beta), 2);
    out << "note: stationary unit chain is not constant in tau: R(tau) = " << g17(c) << " + " << g17(1.0 - c)
        << " exp(-" << g17(alpha + beta) << " tau); R(0) = 1 and only the limit equals ((alpha-beta)/(alpha+beta))^2\n";
  }
}

inline void run_acf_grid(const RunConfig& cfg, const Model& model, std::ostream& out) {
  const auto grid = tau_grid(cfg);
  const ProbVector initial = model.initial();
  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(acf_value(model.generator, initial, t));
  if (!cfg.compare_sim) {
    emit(cfg, out, [&](std::ostream& os) { write_acf_csv(os, grid, values); });
    return;
  }
  const EmpiricalAcf sim = run_simulation(cfg, model, grid);
  emit(cfg, out, [&](std::ostream& os) {
    os << "tau,R,sim_estimate,sim_std_error\n";
    for (std::size_t k = 0; k < grid.size(); ++k)
      os << g17(grid[k]) << ',' << g17(values[k]) << ',' << g17(sim.estimates[k]) << ',' << g17(sim.std_errors[k])
         << '\n';
  });
}

inline void run_simulate(const RunConfig& cfg, const Model& model, std::ostream& out) {
  const auto lags = tau_grid(cfg);
  const EmpiricalAcf sim = run_simulation(cfg, model, lags);
  emit(cfg, out, [&](std::ostream& os) { write_empirical_csv(os, sim); });
}

inline void run_pointproc(const RunConfig& cfg, const Model& model, std::ostream& out) {
  if (cfg.i < 1 || cfg.j < 1) throw Error(Errc::IndexOutOfRange, "--i and --j are one-based");
  const std::size_t i = cfg.i - 1, j = cfg.j - 1;
  const auto& gen = model.generator;
  out << "equilibrium " << g17(equilibrium_arrival_prob(gen, j)) << '\n';
  out << "transient " << g17(transient_arrival_prob(gen, model.initial(), cfg.tau, j)) << '\n';
  out << "conditional " << g17(conditional_arrival_prob(gen, i, j, cfg.tau)) << '\n';
}

}  // namespace detail

/// Executes one command. Returns 0 on success, 1 for model or argument
/// errors and 2 for numerical failures; failures print
/// "ERROR <code>: <detail>" on `err`.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const Model model = load_model(cfg.model_path);
    switch (cfg.command) {
      case Command::Validate: detail::run_validate(cfg, model, out, err); break;
      case Command::Analyze: detail::run_analyze(cfg, model, out, err); break;
      case Command::AcfGrid: detail::run_acf_grid(cfg, model, out); break;
      case Command::Simulate: detail::run_simulate(cfg, model, out); break;
      case Command::PointProc: detail::run_pointproc(cfg, model, out); break;
    }
  } catch (const Error& e) {
    err << "ERROR " << errc_name(e.code()) << ": " << e.detail() << '\n';
    return is_numerical(e.code()) ? 2 : 1;
  }
  return 0;
}

}  // namespace ctmc::cli

#endif  // CTMC_ACF_CLI_HPP
