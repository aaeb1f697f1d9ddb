#ifndef CTMC_ACF_ACF_HPP
#define CTMC_ACF_ACF_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "spectral.hpp"
#include "transient.hpp"

namespace ctmc {

/// One decaying mode a * e^{gamma tau} of the autocorrelation.
struct ExpTerm {
  Complex rate;
  Complex weight;
};

/// R(tau) = c + sum_k a_k e^{gamma_k tau} for tau >= 0. Terms come in
/// conjugate pairs whenever the rate is complex, so the sum is real.
struct ExpMixture {
  double constant_c = 0.0;
  std::vector<ExpTerm> terms;

  double evaluate(double tau) const {
    Complex sum(0.0, 0.0);
    for (const auto& t : terms) sum += t.weight * std::exp(t.rate * tau);
    return constant_c + sum.real();
  }

  /// The decaying part f(tau) = R(tau) - c.
  double decaying_part(double tau) const { return evaluate(tau) - constant_c; }

  /// min |Re gamma_k|; infinity when there are no terms.
  double slowest_rate() const {
    double rate = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) rate = std::min(rate, std::abs(t.rate.real()));
    return rate;
  }

  /// max |Re gamma_k|; zero when there are no terms.
  double fastest_rate() const {
    double rate = 0.0;
    for (const auto& t : terms) rate = std::max(rate, std::abs(t.rate.real()));
    return rate;
  }
};

namespace detail {

inline void check_initial(const GeneratorMatrix& gen, const ProbVector& initial) {
  if (initial.size() != gen.size())
    throw Error(Errc::DimensionMismatch, "initial distribution has " + std::to_string(initial.size()) +
                                             " entries, chain has " + std::to_string(gen.size()) + " states");
}

/// sum_ij s_i s_j q_i M_ij.
template <class M>
auto weighted_bilinear(const StateSpace& states, const ProbVector& initial, const M& m) {
  const Vector s = states.as_vector();
  const Vector left = s.cwiseProduct(initial.vec());
  return (left.transpose().template cast<typename M::Scalar>() * m * s.template cast<typename M::Scalar>()).value();
}

}  // namespace detail

/// R(tau) = E[X(0) X(tau)] = sum_ij s_i s_j (e^{Q tau})_ij q_i, evaluated
/// through uniformization so it is defined for every valid chain.
inline double acf_value(const GeneratorMatrix& gen, const ProbVector& initial, double tau,
                        double tol = kDefaultExpmTolerance) {
  detail::check_initial(gen, initial);
  return detail::weighted_bilinear(gen.states(), initial, expm_uniformization(gen, tau, tol));
}

/// R at a signed lag, using R(-tau) = R(tau).
inline double acf_value_symmetric(const GeneratorMatrix& gen, const ProbVector& initial, double lag,
                                  double tol = kDefaultExpmTolerance) {
  return acf_value(gen, initial, std::abs(lag), tol);
}

/// Centered variant E[X(0) X(tau)] - E[X(0)] E[X(tau)].
inline double autocovariance_value(const GeneratorMatrix& gen, const ProbVector& initial, double tau,
                                   double tol = kDefaultExpmTolerance) {
  detail::check_initial(gen, initial);
  const Matrix m = expm_uniformization(gen, tau, tol);
  const Vector s = gen.states().as_vector();
  const double mean_later = (initial.vec().transpose() * m * s).value();
  return detail::weighted_bilinear(gen.states(), initial, m) - mean_value(initial, gen.states()) * mean_later;
}

/// E[X(0)] E[Z] with Z distributed as the stationary law: the limit of R.
inline double constant_term(const GeneratorMatrix& gen, const ProbVector& initial) {
  detail::check_initial(gen, initial);
  return mean_value(initial, gen.states()) * mean_value(stationary_distribution(gen), gen.states());
}

/// Mixture form from an existing decomposition. c comes from the
/// zero-eigenvalue residue, a_k = sum_ij s_i s_j q_i (E_k)_ij.
inline ExpMixture acf_mixture(const SpectralDecomposition& decomp, const StateSpace& states,
                              const ProbVector& initial) {
  if (initial.size() != decomp.size() || states.size() != decomp.size())
    throw Error(Errc::DimensionMismatch, "decomposition, states and initial distribution disagree in size");
  ExpMixture out;
  for (std::size_t k = 0; k < decomp.size(); ++k) {
    const Complex weight = detail::weighted_bilinear(states, initial, decomp.residues[k]);
    if (k == decomp.zero_index)
      out.constant_c = weight.real();
    else
      out.terms.push_back({decomp.eigenvalues[k], weight});
  }
  return out;
}

/// Throws DegenerateSpectrum when no mixture exists; acf_value still works.
inline ExpMixture acf_mixture(const GeneratorMatrix& gen, const ProbVector& initial) {
  detail::check_initial(gen, initial);
  return acf_mixture(decompose(gen), gen.states(), initial);
}

/// The two-state closed form on states {+1, -1}, Q = [[-alpha, alpha],
/// [beta, -beta]], P{X(0) = +1} = q, written out term by term.
inline double unit_acf_closed_form(double alpha, double beta, double q, double tau) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(Errc::InvalidArgument, "rates must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::InvalidArgument, "q must be a probability");
  if (!(tau >= 0.0)) throw Error(Errc::InvalidArgument, "lag must be >= 0");
  const double s = alpha + beta;
  const double decay = std::exp(-s * tau);
  return 2.0 * (decay * ((alpha - beta) / s) * q + decay * (beta / s)) +
         2.0 * (((beta - alpha) / s) * q + alpha / s) - 1.0;
}

/// True for a two-state chain on {+1, -1} (either order).
inline bool is_unit_chain(const GeneratorMatrix& gen) {
  if (gen.size() != 2) return false;
  const auto s = gen.states().values();
  return (s[0] == 1.0 && s[1] == -1.0) || (s[0] == -1.0 && s[1] == 1.0);
}

/// "tau,R" rows at 17 significant digits.
inline void write_acf_csv(std::ostream& os, std::span<const double> taus, std::span<const double> values) {
  if (taus.size() != values.size()) throw Error(Errc::DimensionMismatch, "tau and R columns differ in length");
  os << "tau,R\n";
  for (std::size_t i = 0; i < taus.size(); ++i) os << detail::g17(taus[i]) << ',' << detail::g17(values[i]) << '\n';
}

}  // namespace ctmc

#endif  // CTMC_ACF_ACF_HPP
