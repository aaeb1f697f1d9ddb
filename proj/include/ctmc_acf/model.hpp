#ifndef CTMC_ACF_MODEL_HPP
#define CTMC_ACF_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace ctmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kProbSumTolerance = 1e-12;
inline constexpr double kStationaryResidualTolerance = 1e-10;

/// Numeric value carried by each state. At least two distinct finite values.
class StateSpace {
 public:
  explicit StateSpace(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2)
      throw Error(Errc::InvalidStateSpace, "need at least 2 states, got " + std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw Error(Errc::InvalidStateSpace, "state " + std::to_string(i + 1) + " is not finite");
      for (std::size_t j = 0; j < i; ++j)
        if (values_[i] == values_[j])
          throw Error(Errc::InvalidStateSpace, "states " + std::to_string(j + 1) + " and " +
                                                   std::to_string(i + 1) + " share value " +
                                                   detail::g17(values_[i]));
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  Vector as_vector() const { return Eigen::Map<const Vector>(values_.data(), Eigen::Index(values_.size())); }

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<double> values_;
};

/// A probability distribution over the N states.
class ProbVector {
 public:
  explicit ProbVector(Vector probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw Error(Errc::InvalidProbVector, "empty distribution");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      const double p = probs_[i];
      if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw Error(Errc::InvalidProbVector,
                    "entry " + std::to_string(i + 1) + " = " + detail::g17(p) + " outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance)
      throw Error(Errc::InvalidProbVector, "entries sum to " + detail::g17(sum));
  }

  explicit ProbVector(const std::vector<double>& probs)
      : ProbVector(Vector(Eigen::Map<const Vector>(probs.data(), Eigen::Index(probs.size())))) {}

  static ProbVector uniform(std::size_t n) { return ProbVector(Vector::Constant(Eigen::Index(n), 1.0 / double(n))); }

  std::size_t size() const noexcept { return std::size_t(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[Eigen::Index(i)]; }
  const Vector& vec() const noexcept { return probs_; }

 private:
  Vector probs_;
};

/// A validated rate matrix Q of an irreducible chain, with its state values.
class GeneratorMatrix {
 public:
  const Matrix& rates() const noexcept { return q_; }
  const StateSpace& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return q_(Eigen::Index(i), Eigen::Index(j)); }

  /// Largest exit rate max_i |q_ii|.
  double max_exit_rate() const { return (-q_.diagonal()).maxCoeff(); }

 private:
  GeneratorMatrix(Matrix q, StateSpace states) : q_(std::move(q)), states_(std::move(states)) {}
  friend GeneratorMatrix validate_generator(const Matrix& raw, StateSpace states);

  Matrix q_;
  StateSpace states_;
};

namespace detail {

/// States reachable from `start` along positive off-diagonal rates.
inline std::vector<bool> reachable_from(const Matrix& q, Eigen::Index start, bool transpose) {
  const Eigen::Index n = q.rows();
  std::vector<bool> seen(std::size_t(n), false);
  std::vector<Eigen::Index> stack{start};
  seen[std::size_t(start)] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rate = transpose ? q(j, i) : q(i, j);
      if (j != i && rate > 0.0 && !seen[std::size_t(j)]) {
        seen[std::size_t(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace detail

/// Checks the generator definition and irreducibility. Never repairs input.
inline GeneratorMatrix validate_generator(const Matrix& raw, StateSpace states) {
  if (raw.rows() != raw.cols())
    throw Error(Errc::NonSquare,
                "matrix is " + std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
  if (std::size_t(raw.rows()) != states.size())
    throw Error(Errc::DimensionMismatch, "matrix dimension " + std::to_string(raw.rows()) +
                                             " does not match " + std::to_string(states.size()) + " states");
  const Eigen::Index n = raw.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(raw(i, j)))
        throw Error(Errc::NonFinite, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (i != j && raw(i, j) < 0.0)
        throw Error(Errc::NegativeOffDiagonal, "entry (" + std::to_string(i + 1) + "," +
                                                   std::to_string(j + 1) + ") = " + detail::g17(raw(i, j)));
    }

  Eigen::Index worst = -1;
  double worst_residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double residual = raw.row(i).sum();
    if (std::abs(residual) > kRowSumTolerance && std::abs(residual) > std::abs(worst_residual)) {
      worst = i;
      worst_residual = residual;
    }
  }
  if (worst >= 0)
    throw Error(Errc::RowSumNonZero,
                "row " + std::to_string(worst + 1) + " residual " + detail::short_sci(worst_residual));

  for (Eigen::Index i = 0; i < n; ++i)
    if (raw(i, i) > 0.0)
      throw Error(Errc::PositiveDiagonal, "entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ")");

  // Strongly connected iff every state is reachable from state 0 in the
  // graph and in its transpose.
  for (bool transpose : {false, true}) {
    const auto seen = detail::reachable_from(raw, 0, transpose);
    for (Eigen::Index j = 0; j < n; ++j)
      if (!seen[std::size_t(j)]) {
        const auto from = transpose ? j + 1 : 1;
        const auto to = transpose ? 1 : j + 1;
        throw Error(Errc::NotIrreducible,
                    "state " + std::to_string(to) + " not reachable from state " + std::to_string(from));
      }
  }
  return GeneratorMatrix(raw, std::move(states));
}

/// Nested-list overload, as read from a model file.
inline GeneratorMatrix validate_generator(const std::vector<std::vector<double>>& raw, StateSpace states) {
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i)
    if (raw[i].size() != n)
      throw Error(Errc::NonSquare, "row " + std::to_string(i + 1) + " has " + std::to_string(raw[i].size()) +
                                       " entries, expected " + std::to_string(n));
  Matrix q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(Eigen::Index(i), Eigen::Index(j)) = raw[i][j];
  return validate_generator(q, std::move(states));
}

/// Unique solution of pi Q = 0, sum(pi) = 1. Solves Q^T pi^T = 0 with the
/// last equation replaced by the normalization row.
inline ProbVector stationary_distribution(const GeneratorMatrix& gen) {
  const Matrix& q = gen.rates();
  const Eigen::Index n = q.rows();
  Matrix a = q.transpose();
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw Error(Errc::SingularSystem, "normalized stationary system is singular");
  Vector pi = lu.solve(rhs);

  const double residual = (pi.transpose() * q).cwiseAbs().maxCoeff();
  if (!pi.allFinite() || residual > kStationaryResidualTolerance || (pi.array() <= 0.0).any())
    throw Error(Errc::SingularSystem, "stationary solve failed, residual " + detail::short_sci(residual));
  // Remove the last-bit drift of the normalization before wrapping.
  pi /= pi.sum();
  return ProbVector(std::move(pi));
}

/// sum_i s_i p_i.
inline double mean_value(const ProbVector& dist, const StateSpace& states) {
  if (dist.size() != states.size())
    throw Error(Errc::DimensionMismatch, "distribution has " + std::to_string(dist.size()) + " entries, " +
                                             std::to_string(states.size()) + " states");
  return dist.vec().dot(states.as_vector());
}

/// sum_i s_i^2 p_i, the lag-zero autocorrelation.
inline double second_moment(const ProbVector& dist, const StateSpace& states) {
  if (dist.size() != states.size())
    throw Error(Errc::DimensionMismatch, "distribution has " + std::to_string(dist.size()) + " entries, " +
                                             std::to_string(states.size()) + " states");
  return dist.vec().dot(states.as_vector().cwiseAbs2());
}

/// The 2-state chain on {+1, -1} with Q = [[-alpha, alpha], [beta, -beta]].
inline GeneratorMatrix unit_chain(double alpha, double beta) {
  Matrix q(2, 2);
  q << -alpha, alpha, beta, -beta;
  return validate_generator(q, StateSpace({1.0, -1.0}));
}

}  // namespace ctmc

#endif  // CTMC_ACF_MODEL_HPP
