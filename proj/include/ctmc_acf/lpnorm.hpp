#ifndef CTMC_ACF_LPNORM_HPP
#define CTMC_ACF_LPNORM_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "acf.hpp"
#include "error.hpp"
#include "model.hpp"
#include "spectral.hpp"
#include "transient.hpp"

namespace ctmc {

inline constexpr double kCZeroTolerance = 1e-10;
inline constexpr double kTailRelativeTolerance = 1e-12;
inline constexpr double kHorizonTimeConstants = 50.0;

enum class LpClass {
  NotInLpAnyP,  // c != 0: the plateau makes every integral of |R|^p diverge
  InLpAllP,     // c == 0: R is a finite sum of decaying exponentials
};

inline constexpr std::string_view lp_class_name(LpClass c) noexcept {
  return c == LpClass::NotInLpAnyP ? "NotInLpAnyP" : "InLpAllP";
}

/// Integrability of R over tau >= 0. `f_lp` maps p to
/// (int_0^inf |f|^p)^{1/p} for the decaying part; it is empty when the
/// mixture was unavailable (see `mixture_available`).
struct LpReport {
  double c = 0.0;
  LpClass integrable_class = LpClass::NotInLpAnyP;
  double sup_norm = 0.0;
  std::map<double, double> f_lp_values;
  double c_zero_tolerance = kCZeroTolerance;
  bool mixture_available = true;
};

namespace detail {

/// Golden-section maximization of a unimodal-on-bracket function.
template <class F>
double golden_max(F&& f, double lo, double hi, int iterations = 100) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max({f1, f2, f(lo), f(hi)});
}

/// Linear grid on [0, horizon] merged with a log grid that resolves the
/// fastest mode near zero.
inline std::vector<double> sup_grid(double horizon, double fastest_rate, std::size_t linear_points = 4001) {
  std::vector<double> grid;
  grid.reserve(linear_points + 400);
  for (std::size_t i = 0; i < linear_points; ++i) grid.push_back(horizon * double(i) / double(linear_points - 1));
  if (fastest_rate > 0.0) {
    const double lo = 1e-4 / fastest_rate;
    if (lo < horizon) {
      const std::size_t log_points = 400;
      const double ratio = std::log(horizon / lo);
      for (std::size_t i = 0; i < log_points; ++i)
        grid.push_back(lo * std::exp(ratio * double(i) / double(log_points - 1)));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

template <class F>
double grid_sup(F&& abs_r, const std::vector<double>& grid) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = abs_r(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi > lo) best_value = std::max(best_value, golden_max(abs_r, lo, hi));
  return best_value;
}

/// int_0^T |f|^p over geometric panels starting at the fastest time scale.
inline double panel_integral(const ExpMixture& mixture, double p, double horizon) {
  auto integrand = [&](double t) { return std::pow(std::abs(mixture.decaying_part(t)), p); };
  const double first = std::min(horizon, 1.0 / std::max(mixture.fastest_rate(), 1e-300));
  double total = 0.0;
  double a = 0.0, b = first;
  while (a < horizon) {
    b = std::min(b, horizon);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 8, 1e-12);
    a = b;
    b *= 2.0;
  }
  return total;
}

}  // namespace detail

/// (int_0^inf |f(tau)|^p dtau)^{1/p} for the decaying part of the mixture.
/// The integral runs to a horizon past which the exponential envelope
/// sum|a_k| e^{-mu tau} bounds the remaining tail below 1e-12 of the total.
inline double decaying_lp_norm(const ExpMixture& mixture, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "p must be finite and >= 1");
  double envelope = 0.0;
  for (const auto& t : mixture.terms) envelope += std::abs(t.weight);
  if (envelope == 0.0 || mixture.terms.empty()) return 0.0;
  const double mu = mixture.slowest_rate();
  const double decay = p * mu;
  const double log_scale = p * std::log(envelope) - std::log(decay);

  auto tail_bound = [&](double horizon) { return std::exp(log_scale - decay * horizon); };

  double horizon = 40.0 / decay;
  double integral = detail::panel_integral(mixture, p, horizon);
  for (int refine = 0; refine < 8; ++refine) {
    if (integral <= 0.0) return 0.0;
    if (tail_bound(horizon) <= kTailRelativeTolerance * integral) break;
    horizon = std::max(horizon * 1.5, (log_scale - std::log(kTailRelativeTolerance * integral)) / decay);
    integral = detail::panel_integral(mixture, p, horizon);
  }
  return std::pow(integral, 1.0 / p);
}

/// L^p classification from the mixture form of R.
inline LpReport classify(const ExpMixture& mixture, std::span<const double> p_list) {
  for (double p : p_list)
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "p must be finite and >= 1");
  LpReport report;
  report.c = mixture.constant_c;
  report.integrable_class = std::abs(report.c) > report.c_zero_tolerance ? LpClass::NotInLpAnyP : LpClass::InLpAllP;

  const double slowest = mixture.slowest_rate();
  const double horizon = std::isfinite(slowest) && slowest > 0.0 ? kHorizonTimeConstants / slowest : 1.0;
  auto abs_r = [&](double t) { return std::abs(mixture.evaluate(t)); };
  report.sup_norm =
      std::max({detail::grid_sup(abs_r, detail::sup_grid(horizon, mixture.fastest_rate())), std::abs(report.c),
                std::abs(mixture.evaluate(0.0))});

  for (double p : p_list) report.f_lp_values[p] = decaying_lp_norm(mixture, p);
  return report;
}

/// Classification for any valid chain. Uses the mixture when the spectrum
/// allows it; otherwise c comes from the product of means, the sup norm from
/// a uniformized grid, and f_lp is left empty with mixture_available = false.
inline LpReport classify(const GeneratorMatrix& gen, const ProbVector& initial, std::span<const double> p_list) {
  const double c = constant_term(gen, initial);
  try {
    LpReport report = classify(acf_mixture(gen, initial), p_list);
    // Product-of-means c decides the class; the residue c agrees to ~1e-15.
    report.c = c;
    report.integrable_class = std::abs(c) > report.c_zero_tolerance ? LpClass::NotInLpAnyP : LpClass::InLpAllP;
    report.sup_norm = std::max(report.sup_norm, std::abs(c));
    return report;
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSpectrum) throw;
  }
  for (double p : p_list)
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "p must be finite and >= 1");

  LpReport report;
  report.c = c;
  report.mixture_available = false;
  report.integrable_class = std::abs(c) > report.c_zero_tolerance ? LpClass::NotInLpAnyP : LpClass::InLpAllP;

  const auto eigenvalues = sorted_eigenvalues(gen);
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& g : eigenvalues)
    if (g != Complex(0.0, 0.0)) slowest = std::min(slowest, std::abs(g.real()));
  const double horizon = kHorizonTimeConstants / slowest;

  // Step the row vector (s o q)^T e^{Q k h} along an even grid.
  const std::size_t points = 2001;
  const double step = horizon / double(points - 1);
  const Matrix step_matrix = expm_uniformization(gen, step);
  const Vector s = gen.states().as_vector();
  Vector row = s.cwiseProduct(initial.vec());
  std::vector<double> values;
  values.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    values.push_back(std::abs(row.dot(s)));
    row = (row.transpose() * step_matrix).transpose();
  }
  const auto best = std::size_t(std::max_element(values.begin(), values.end()) - values.begin());
  double sup = values[best];
  const double lo = step * double(best == 0 ? 0 : best - 1);
  const double hi = step * double(std::min(best + 1, points - 1));
  sup = std::max(sup, detail::golden_max([&](double t) { return std::abs(acf_value(gen, initial, t)); }, lo, hi, 60));
  report.sup_norm = std::max({sup, std::abs(c), std::abs(second_moment(initial, gen.states()))});
  return report;
}

/// E[Z] vanishes although the stationary law is not uniform: an instance
/// where c = 0 without uniform equilibrium.
inline bool zero_mean_nonuniform_equilibrium(const GeneratorMatrix& gen, double tol = kCZeroTolerance) {
  const ProbVector pi = stationary_distribution(gen);
  if (std::abs(mean_value(pi, gen.states())) > tol) return false;
  const double u = 1.0 / double(gen.size());
  return (pi.vec().array() - u).abs().maxCoeff() > 1e-9;
}

}  // namespace ctmc

#endif  // CTMC_ACF_LPNORM_HPP
