#ifndef CTMC_ACF_SIMULATE_HPP
#define CTMC_ACF_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "random.hpp"

namespace ctmc {

/// Piecewise-constant sample path: state visited_states[k] holds on
/// [jump_times[k], jump_times[k+1]), the last epoch running to the horizon.
struct Trajectory {
  std::vector<double> jump_times;
  std::vector<std::size_t> visited_states;
  double horizon = 0.0;

  std::size_t epochs() const noexcept { return jump_times.size(); }

  std::size_t state_at(double t) const {
    auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    return visited_states[std::size_t(it - jump_times.begin()) - 1];
  }

  /// Fraction of [0, horizon] spent in each of n states.
  std::vector<double> occupancy(std::size_t n) const {
    std::vector<double> time(n, 0.0);
    for (std::size_t k = 0; k < epochs(); ++k) {
      const double end = k + 1 < epochs() ? jump_times[k + 1] : horizon;
      time[visited_states[k]] += end - jump_times[k];
    }
    for (double& x : time) x /= horizon;
    return time;
  }
};

struct EmpiricalAcf {
  std::vector<double> lags;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::size_t n_trajectories = 0;
};

/// Jump-chain sampler with precomputed cumulative tables.
class PathSampler {
 public:
  PathSampler(const GeneratorMatrix& gen, const ProbVector& initial) : n_(gen.size()) {
    if (initial.size() != n_)
      throw Error(Errc::DimensionMismatch, "initial distribution has " + std::to_string(initial.size()) +
                                               " entries, chain has " + std::to_string(n_) + " states");
    initial_cdf_.resize(n_);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) initial_cdf_[i] = acc += initial[i];
    exit_rate_.resize(n_);
    jump_cdf_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      exit_rate_[i] = -gen(i, i);
      if (!(exit_rate_[i] > 0.0))
        throw Error(Errc::AbsorbingState, "state " + std::to_string(i + 1) + " has no exit rate");
      double row = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != i) row += gen(i, j) / exit_rate_[i];
        jump_cdf_[i * n_ + j] = row;
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  double exit_rate(std::size_t i) const { return exit_rate_[i]; }

  Trajectory sample(double horizon, CounterRng& rng) const {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
      throw Error(Errc::InvalidArgument, "horizon must be finite and > 0");
    Trajectory path;
    path.horizon = horizon;
    std::size_t state = draw(std::span<const double>(initial_cdf_), rng.uniform_open());
    double t = 0.0;
    while (true) {
      path.jump_times.push_back(t);
      path.visited_states.push_back(state);
      t += rng.exponential(exit_rate_[state]);
      if (t >= horizon) break;
      const std::size_t next =
          draw(std::span<const double>(jump_cdf_).subspan(state * n_, n_), rng.uniform_open());
      state = next == state ? fallback_neighbor(state) : next;
    }
    return path;
  }

 private:
  /// Smallest index whose cumulative weight exceeds u.
  static std::size_t draw(std::span<const double> cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    return std::min(std::size_t(it - cdf.begin()), cdf.size() - 1);
  }

  // upper_bound can land on the (zero-width) diagonal slot only through
  // rounding at the end of the table; take the last positive-rate neighbor.
  std::size_t fallback_neighbor(std::size_t state) const {
    for (std::size_t j = n_; j-- > 0;)
      if (j != state && jump_cdf_[state * n_ + j] > (j == 0 ? 0.0 : jump_cdf_[state * n_ + j - 1])) return j;
    return state == 0 ? 1 : 0;
  }

  std::size_t n_;
  std::vector<double> initial_cdf_;
  std::vector<double> exit_rate_;
  std::vector<double> jump_cdf_;
};

/// Deterministic given the seed: same inputs give the same path.
inline Trajectory sample_trajectory(const GeneratorMatrix& gen, const ProbVector& initial, double horizon,
                                    std::uint64_t seed) {
  CounterRng rng(mix64(seed));
  return PathSampler(gen, initial).sample(horizon, rng);
}

/// Durations of the completed visits to `state_index`, in visit order. The
/// final epoch is censored by the horizon and excluded.
inline std::vector<double> stitched_sojourns(const Trajectory& traj, std::size_t state_index) {
  std::size_t visits = 0;
  std::vector<double> out;
  for (std::size_t k = 0; k < traj.epochs(); ++k) {
    if (traj.visited_states[k] != state_index) continue;
    ++visits;
    if (k + 1 < traj.epochs()) out.push_back(traj.jump_times[k + 1] - traj.jump_times[k]);
  }
  if (visits < 2)
    throw Error(Errc::InsufficientVisits,
                "state " + std::to_string(state_index + 1) + " visited " + std::to_string(visits) + " time(s)");
  return out;
}

/// Monte Carlo estimate of E[X(0) X(tau)]: one product per trajectory per
/// lag. Trajectory m uses substream (master_seed, m), and the reduction runs
/// in trajectory order, so output does not depend on `threads`.
inline EmpiricalAcf empirical_acf(const GeneratorMatrix& gen, const ProbVector& initial, std::span<const double> lags,
                                  std::size_t n_trajectories, double horizon, std::uint64_t master_seed,
                                  unsigned threads = 0) {
  if (n_trajectories < 1) throw Error(Errc::InvalidArgument, "need at least one trajectory");
  if (lags.empty()) throw Error(Errc::InvalidArgument, "no lags requested");
  const PathSampler sampler(gen, initial);
  double max_lag = 0.0;
  for (double lag : lags) {
    if (!(lag >= 0.0) || !std::isfinite(lag)) throw Error(Errc::InvalidArgument, "lags must be finite and >= 0");
    max_lag = std::max(max_lag, lag);
  }
  double longest_sojourn = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) longest_sojourn = std::max(longest_sojourn, 1.0 / sampler.exit_rate(i));
  if (!(horizon >= max_lag + longest_sojourn))
    throw Error(Errc::InvalidArgument, "horizon " + detail::g17(horizon) + " must be at least max lag + " +
                                           detail::g17(longest_sojourn) + " (one mean sojourn)");

  const std::size_t n_lags = lags.size();
  std::vector<double> products(n_trajectories * n_lags);
  const auto& states = gen.states();
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      CounterRng rng = CounterRng::substream(master_seed, m);
      const Trajectory path = sampler.sample(horizon, rng);
      const double x0 = states[path.visited_states.front()];
      for (std::size_t l = 0; l < n_lags; ++l) products[m * n_lags + l] = x0 * states[path.state_at(lags[l])];
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads,
                                      unsigned(std::min<std::size_t>(n_trajectories, 1024))));
  if (workers == 1) {
    work(0, n_trajectories);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_trajectories + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n_trajectories, w * chunk);
      const std::size_t end = std::min(n_trajectories, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }

  EmpiricalAcf out;
  out.lags.assign(lags.begin(), lags.end());
  out.n_trajectories = n_trajectories;
  const double n = double(n_trajectories);
  for (std::size_t l = 0; l < n_lags; ++l) {
    double sum = 0.0;
    for (std::size_t m = 0; m < n_trajectories; ++m) sum += products[m * n_lags + l];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t m = 0; m < n_trajectories; ++m) {
      const double d = products[m * n_lags + l] - mean;
      ss += d * d;
    }
    out.estimates.push_back(mean);
    out.std_errors.push_back(n_trajectories > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0);
  }
  return out;
}

/// "lag,estimate,std_error,n" rows at 17 significant digits.
inline void write_empirical_csv(std::ostream& os, const EmpiricalAcf& acf) {
  os << "lag,estimate,std_error,n\n";
  for (std::size_t l = 0; l < acf.lags.size(); ++l)
    os << detail::g17(acf.lags[l]) << ',' << detail::g17(acf.estimates[l]) << ',' << detail::g17(acf.std_errors[l])
       << ',' << acf.n_trajectories << '\n';
}

}  // namespace ctmc

#endif  // CTMC_ACF_SIMULATE_HPP
