#ifndef CTMC_ACF_TRANSIENT_HPP
#define CTMC_ACF_TRANSIENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "model.hpp"

namespace ctmc {

inline constexpr double kUniformizationInflation = 1.05;
inline constexpr double kMaxUniformizedHorizon = 1e6;
inline constexpr std::size_t kMaxSegments = 64;
inline constexpr double kSegmentHorizon = kMaxUniformizedHorizon / double(kMaxSegments);
inline constexpr double kDefaultExpmTolerance = 1e-14;

namespace detail {

/// Chernoff bound on P{N >= m} (m > lambda) or P{N <= m} (m < lambda) for
/// N ~ Poisson(lambda): e^{-lambda} (e lambda / m)^m.
inline double poisson_chernoff(double lambda, double m) {
  if (m <= 0.0) return std::exp(-lambda);
  return std::exp(-lambda + m * (1.0 + std::log(lambda / m)));
}

/// Truncation window [left, right] and Poisson(lambda) weights on it, with
/// each discarded tail at most `tail` in probability.
struct PoissonWindow {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<double> weights;  // weights[n - left]
};

inline constexpr double kPoissonReferenceTail = 1e-20;

inline std::pair<std::size_t, std::size_t> poisson_bounds(double lambda, double tail) {
  // Right: smallest m > lambda with P{N >= m} <= tail; keep n <= m - 1.
  double m = std::floor(lambda) + 1.0;
  while (poisson_chernoff(lambda, m) > tail) m += 1.0;
  const std::size_t right = std::size_t(m) - 1;
  // Left: largest m < lambda with P{N <= m} <= tail; keep n >= m + 1.
  std::size_t left = 0;
  if (lambda > 1.0) {
    double lo = std::ceil(lambda) - 1.0;
    while (lo >= 0.0 && poisson_chernoff(lambda, lo) > tail) lo -= 1.0;
    if (lo >= 0.0) left = std::size_t(lo) + 1;
  }
  return {std::min(left, right), right};
}

inline PoissonWindow poisson_window(double lambda, double tail) {
  // Weights are normalized on a fixed wide window and then cut, so they do
  // not depend on `tail` and tighter windows only add terms.
  const auto [wide_left, wide_right] = poisson_bounds(lambda, std::min(tail, kPoissonReferenceTail));
  const std::size_t mode = std::clamp(std::size_t(std::floor(lambda)), wide_left, wide_right);
  std::vector<double> wide(wide_right - wide_left + 1, 0.0);
  wide[mode - wide_left] = 1.0;
  for (std::size_t n = mode; n < wide_right; ++n)
    wide[n + 1 - wide_left] = wide[n - wide_left] * lambda / double(n + 1);
  for (std::size_t n = mode; n > wide_left; --n)
    wide[n - 1 - wide_left] = wide[n - wide_left] * double(n) / lambda;
  double total = 0.0;
  for (double x : wide) total += x;

  PoissonWindow w;
  std::tie(w.left, w.right) = poisson_bounds(lambda, tail);
  w.left = std::max(w.left, wide_left);
  w.right = std::min(w.right, wide_right);
  w.weights.assign(wide.begin() + std::ptrdiff_t(w.left - wide_left),
                   wide.begin() + std::ptrdiff_t(w.right - wide_left + 1));
  for (double& x : w.weights) x /= total;
  return w;
}

/// One uniformization segment: e^{Q t} ~ sum_n Poisson(Lambda t; n) P^n.
inline Matrix uniformized_segment(const Matrix& q, double lambda_rate, double t, double tol) {
  const Eigen::Index n = q.rows();
  const Matrix p = Matrix::Identity(n, n) + q / lambda_rate;
  const PoissonWindow w = poisson_window(lambda_rate * t, tol / 2.0);
  Matrix power = Matrix::Identity(n, n);
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t k = 0; k <= w.right; ++k) {
    if (k >= w.left) acc.noalias() += w.weights[k - w.left] * power;
    if (k < w.right) power = power * p;
  }
  return acc;
}

}  // namespace detail

/// e^{Q tau} by uniformization with a certified max-norm truncation error of
/// at most `tol`. Lambda = 1.05 max|q_ii|, P = I + Q / Lambda. Long horizons
/// are split into at most 64 equal segments whose results are multiplied.
inline Matrix expm_uniformization(const GeneratorMatrix& gen, double tau, double tol = kDefaultExpmTolerance) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(Errc::InvalidArgument, "lag must be finite and >= 0");
  if (!(tol > 0.0 && tol <= 1e-6)) throw Error(Errc::InvalidArgument, "tolerance must be in (0, 1e-6]");
  const Eigen::Index n = Eigen::Index(gen.size());
  if (tau == 0.0) return Matrix::Identity(n, n);

  const double lambda_rate = kUniformizationInflation * gen.max_exit_rate();
  const double horizon = lambda_rate * tau;
  if (horizon > kMaxUniformizedHorizon)
    throw Error(Errc::OverflowHorizon, "Lambda*tau = " + detail::short_sci(horizon) + " exceeds " +
                                           detail::short_sci(kMaxUniformizedHorizon));

  const std::size_t segments = std::max<std::size_t>(1, std::size_t(std::ceil(horizon / kSegmentHorizon)));
  // Errors of stochastic factors add across a product.
  const Matrix segment =
      detail::uniformized_segment(gen.rates(), lambda_rate, tau / double(segments), tol / double(segments));
  Matrix out = segment;
  for (std::size_t s = 1; s < segments; ++s) out = out * segment;
  return out;
}

/// pi(tau) = pi(0) e^{Q tau}.
inline ProbVector transient_distribution(const ProbVector& initial, const GeneratorMatrix& gen, double tau,
                                         double tol = kDefaultExpmTolerance) {
  if (initial.size() != gen.size())
    throw Error(Errc::DimensionMismatch, "distribution has " + std::to_string(initial.size()) + " entries, " +
                                             std::to_string(gen.size()) + " states");
  Vector row = (initial.vec().transpose() * expm_uniformization(gen, tau, tol)).transpose();
  row = row.cwiseMax(0.0).cwiseMin(1.0);
  row /= row.sum();
  return ProbVector(std::move(row));
}

}  // namespace ctmc

#endif  // CTMC_ACF_TRANSIENT_HPP
