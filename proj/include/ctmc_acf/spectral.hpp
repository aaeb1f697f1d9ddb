#ifndef CTMC_ACF_SPECTRAL_HPP
#define CTMC_ACF_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "model.hpp"

namespace ctmc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kZeroEigenvalueTolerance = 1e-10;
inline constexpr double kEigenGapRelative = 1e-8;
inline constexpr double kResidueTolerance = 1e-9;
inline constexpr double kImaginaryResidueTolerance = 1e-9;

/// e^{Q t} = sum_k e^{gamma_k t} E_k for a diagonalizable generator.
///
/// Eigenvalues are ordered by descending |Re|, then descending |Im|, then
/// ascending Im, so conjugate pairs are adjacent and the zero eigenvalue is
/// last. Each residue E_k is the outer product of the right eigenvector
/// (column) and the biorthogonally normalized left eigenvector (row).
struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexMatrix> residues;
  std::size_t zero_index = 0;
  ProbVector left_null_vector;
  bool is_diagonalizable_simple = true;

  std::size_t size() const noexcept { return eigenvalues.size(); }

  /// min |Re(gamma_k)| over the nonzero eigenvalues: the slowest decay rate.
  double slowest_rate() const {
    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
      if (k != zero_index) rate = std::min(rate, std::abs(eigenvalues[k].real()));
    return rate;
  }
};

namespace detail {

inline bool eigen_order(const Complex& a, const Complex& b) {
  const double ra = std::abs(a.real()), rb = std::abs(b.real());
  if (ra != rb) return ra > rb;
  const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
  if (ia != ib) return ia > ib;
  return a.imag() < b.imag();
}

inline std::vector<std::size_t> eigen_permutation(const Eigen::VectorXcd& values) {
  std::vector<std::size_t> order(std::size_t(values.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eigen_order(values[Eigen::Index(a)], values[Eigen::Index(b)]); });
  return order;
}

}  // namespace detail

/// All eigenvalues of Q in decomposition order, with the minimum-modulus one
/// snapped to exactly zero. Available even when the spectrum is degenerate.
inline std::vector<Complex> sorted_eigenvalues(const GeneratorMatrix& gen) {
  Eigen::EigenSolver<Matrix> solver(gen.rates(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(Errc::DegenerateSpectrum, "eigenvalue iteration did not converge");
  Eigen::VectorXcd values = solver.eigenvalues();
  Eigen::Index zero = 0;
  values.cwiseAbs().minCoeff(&zero);
  if (std::abs(values[zero]) > kZeroEigenvalueTolerance)
    throw Error(Errc::DegenerateSpectrum,
                "smallest eigenvalue modulus " + detail::short_sci(std::abs(values[zero])) + " is not zero");
  values[zero] = Complex(0.0, 0.0);
  std::vector<Complex> out;
  for (std::size_t k : detail::eigen_permutation(values)) out.push_back(values[Eigen::Index(k)]);
  return out;
}

/// Eigenvalue/residue form of Q. Throws DegenerateSpectrum when two
/// eigenvalues are within 1e-8 max|gamma| of each other or when the computed
/// residues fail their projector identities; callers then fall back to
/// uniformization.
inline SpectralDecomposition decompose(const GeneratorMatrix& gen) {
  const Matrix& q = gen.rates();
  const Eigen::Index n = q.rows();

  Eigen::EigenSolver<Matrix> solver(q, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw Error(Errc::DegenerateSpectrum, "eigenvalue iteration did not converge");
  Eigen::VectorXcd values = solver.eigenvalues();
  const ComplexMatrix right = solver.eigenvectors();

  Eigen::Index zero = 0;
  values.cwiseAbs().minCoeff(&zero);
  if (std::abs(values[zero]) > kZeroEigenvalueTolerance)
    throw Error(Errc::DegenerateSpectrum,
                "smallest eigenvalue modulus " + detail::short_sci(std::abs(values[zero])) + " is not zero");
  values[zero] = Complex(0.0, 0.0);

  const double scale = values.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < a; ++b) {
      const double gap = std::abs(values[a] - values[b]);
      if (gap < kEigenGapRelative * scale)
        throw Error(Errc::DegenerateSpectrum, "eigenvalues " + detail::g17(values[a].real()) + " and " +
                                                  detail::g17(values[b].real()) + " are separated by " +
                                                  detail::short_sci(gap));
    }

  Eigen::PartialPivLU<ComplexMatrix> lu(right);
  const ComplexMatrix left = lu.inverse();  // rows are the left eigenvectors, f_k g_k = 1
  if (!left.allFinite()) throw Error(Errc::DegenerateSpectrum, "eigenvector basis is singular");

  ProbVector pi = stationary_distribution(gen);

  SpectralDecomposition out{.left_null_vector = pi};
  const auto order = detail::eigen_permutation(values);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Eigen::Index k = Eigen::Index(order[pos]);
    out.eigenvalues.push_back(values[k]);
    if (k == zero) {
      out.zero_index = pos;
      // Stationary projector: every row equals pi. Check the computed one
      // before replacing it with the exact real form.
      const ComplexMatrix computed = right.col(k) * left.row(k);
      const Matrix exact = Vector::Ones(n) * pi.vec().transpose();
      if ((computed - exact.cast<Complex>()).cwiseAbs().maxCoeff() > kResidueTolerance)
        throw Error(Errc::DegenerateSpectrum, "zero-eigenvalue residue does not match the stationary projector");
      out.residues.push_back(exact.cast<Complex>());
    } else {
      out.residues.push_back(right.col(k) * left.row(k));
    }
  }

  // Completeness and reconstruction; idempotency follows from these plus
  // distinct eigenvalues but is cheap enough to check for N <= 100.
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    sum += out.residues[k];
    rebuilt += out.eigenvalues[k] * out.residues[k];
  }
  const double completeness = (sum - identity).cwiseAbs().maxCoeff();
  const double reconstruction = (rebuilt - q.cast<Complex>()).cwiseAbs().maxCoeff();
  if (completeness > kResidueTolerance || reconstruction > kResidueTolerance)
    throw Error(Errc::DegenerateSpectrum, "ill-conditioned eigenbasis: completeness " +
                                              detail::short_sci(completeness) + ", reconstruction " +
                                              detail::short_sci(reconstruction));
  return out;
}

/// sum_k e^{gamma_k t} E_k as a real row-stochastic matrix.
inline Matrix expm_spectral(const SpectralDecomposition& decomp, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(Errc::InvalidArgument, "lag must be finite and >= 0");
  const Eigen::Index n = Eigen::Index(decomp.left_null_vector.size());
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < decomp.size(); ++k) acc += std::exp(decomp.eigenvalues[k] * tau) * decomp.residues[k];

  const double imag = acc.imag().cwiseAbs().maxCoeff();
  if (imag > kImaginaryResidueTolerance)
    throw Error(Errc::ImaginaryResidueTooLarge, "imaginary part " + detail::short_sci(imag));

  Matrix out = acc.real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double& v = out(i, j);
      if (v < 0.0 && v > -kImaginaryResidueTolerance) v = 0.0;
      if (v > 1.0 && v < 1.0 + kImaginaryResidueTolerance) v = 1.0;
    }
  return out;
}

}  // namespace ctmc

#endif  // CTMC_ACF_SPECTRAL_HPP
