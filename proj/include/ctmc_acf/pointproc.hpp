#ifndef CTMC_ACF_POINTPROC_HPP
#define CTMC_ACF_POINTPROC_HPP

#include <cstddef>
#include <string>

#include "error.hpp"
#include "model.hpp"
#include "transient.hpp"

// Arrival attribution for the chain viewed as a superposition of N point
// processes, one per state. Indices are zero-based.

namespace ctmc {

namespace detail {

inline void check_index(const GeneratorMatrix& gen, std::size_t j, const char* name) {
  if (j >= gen.size())
    throw Error(Errc::IndexOutOfRange, std::string(name) + " = " + std::to_string(j) + " with " +
                                           std::to_string(gen.size()) + " states");
}

}  // namespace detail

/// pi_j: the arrival is from stream j in equilibrium.
inline double equilibrium_arrival_prob(const GeneratorMatrix& gen, std::size_t j) {
  detail::check_index(gen, j, "j");
  return stationary_distribution(gen)[j];
}

/// [pi(0) e^{Q tau}]_j.
inline double transient_arrival_prob(const GeneratorMatrix& gen, const ProbVector& initial, double tau,
                                     std::size_t j) {
  detail::check_index(gen, j, "j");
  if (initial.size() != gen.size())
    throw Error(Errc::DimensionMismatch, "initial distribution has " + std::to_string(initial.size()) +
                                             " entries, chain has " + std::to_string(gen.size()) + " states");
  const Matrix m = expm_uniformization(gen, tau);
  return initial.vec().dot(m.col(Eigen::Index(j)));
}

/// [e^{Q tau}]_ij: stream j at tau given state i at time zero.
inline double conditional_arrival_prob(const GeneratorMatrix& gen, std::size_t i, std::size_t j, double tau) {
  detail::check_index(gen, i, "i");
  detail::check_index(gen, j, "j");
  return expm_uniformization(gen, tau)(Eigen::Index(i), Eigen::Index(j));
}

}  // namespace ctmc

#endif  // CTMC_ACF_POINTPROC_HPP
