#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "ctmc_acf/lpnorm.hpp"
#include "test_support.hpp"

using namespace ctmc;

namespace {

ProbVector pv(std::vector<double> p) { return ProbVector(p); }

/// int_0^inf (sum_k a_k e^{-b_k t})^p dt for integer p by multinomial
/// expansion: sum over exponent tuples m (|m| = p) of
/// p!/prod(m_k!) prod(a_k^{m_k}) / sum(m_k b_k).
double multinomial_integral(const std::vector<double>& a, const std::vector<double>& b, int p) {
  double total = 0.0;
  std::vector<int> m(a.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k + 1 == a.size()) {
      m[k] = left;
      double coeff = std::tgamma(p + 1.0), rate = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        coeff *= std::pow(a[i], m[i]) / std::tgamma(m[i] + 1.0);
        rate += m[i] * b[i];
      }
      total += coeff / rate;
      return;
    }
    for (int take = 0; take <= left; ++take) {
      m[k] = take;
      rec(k + 1, left - take);
    }
  };
  rec(0, p);
  return total;
}

ExpMixture mixture_of(double c, const std::vector<double>& a, const std::vector<double>& b) {
  ExpMixture m;
  m.constant_c = c;
  for (std::size_t k = 0; k < a.size(); ++k) m.terms.push_back({Complex(-b[k], 0.0), Complex(a[k], 0.0)});
  return m;
}

}  // namespace

TEST(LpNorm, StationaryUnitChainIsNotIntegrable) {
  const auto gen = unit_chain(1.0, 3.0);
  const std::vector<double> ps{1.0};
  const auto report = classify(gen, stationary_distribution(gen), ps);
  EXPECT_EQ(report.integrable_class, LpClass::NotInLpAnyP);
  EXPECT_NEAR(report.c, 0.25, 1e-14);
  EXPECT_NEAR(report.sup_norm, 1.0, 1e-9);
  EXPECT_TRUE(report.mixture_available);
  // f = 0.75 e^{-4 tau}: L1 = 0.75 / 4.
  EXPECT_NEAR(report.f_lp_values.at(1.0), 0.1875, 1e-12);
}

TEST(LpNorm, HalfInitialSymmetricChainIsInEveryLp) {
  const std::vector<double> ps{1.0, 2.0};
  const auto report = classify(unit_chain(1.0, 1.0), pv({0.5, 0.5}), ps);
  EXPECT_EQ(report.integrable_class, LpClass::InLpAllP);
  // int e^{-2 p tau} = 1/(2p): L1 = 1/2, L2 = (1/4)^{1/2} = 1/2.
  EXPECT_NEAR(report.f_lp_values.at(1.0), 0.5, 1e-12);
  EXPECT_NEAR(report.f_lp_values.at(2.0), 0.5, 1e-12);
  EXPECT_NEAR(report.sup_norm, 1.0, 1e-12);
}

TEST(LpNorm, EqualRatesStationaryHasZeroPlateau) {
  const auto gen = unit_chain(2.0, 2.0);
  const auto init = stationary_distribution(gen);
  const std::vector<double> ps{1.0};
  const auto report = classify(gen, init, ps);
  EXPECT_EQ(report.integrable_class, LpClass::InLpAllP);
  EXPECT_NEAR(report.c, 0.0, 1e-15);
  // R = f = e^{-4 tau}.
  for (double tau : {0.0, 0.2, 1.0}) EXPECT_NEAR(acf_value(gen, init, tau), std::exp(-4.0 * tau), 1e-13);
}

TEST(LpNorm, DegenerateSpectrumFallsBackToGrid) {
  const auto gen = oracle::circulant3({-1.0, 0.5, 2.0});
  const std::vector<double> ps{1.0, 2.0};
  const auto report = classify(gen, ProbVector::uniform(3), ps);
  EXPECT_FALSE(report.mixture_available);
  EXPECT_TRUE(report.f_lp_values.empty());
  // Uniform equilibrium on these values has mean 0.5, so c = 0.25.
  EXPECT_NEAR(report.c, 0.25, 1e-14);
  EXPECT_EQ(report.integrable_class, LpClass::NotInLpAnyP);
  EXPECT_NEAR(report.sup_norm, (1.0 + 0.25 + 4.0) / 3.0, 1e-12);
}

TEST(LpNorm, RejectsSmallExponent) {
  const std::vector<double> ps{0.5};
  EXPECT_THROW(classify(mixture_of(0.0, {1.0}, {1.0}), ps), Error);
}

TEST(LpNorm, QuadratureMatchesMultinomialOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> weight(0.05, 2.0), log_rate(std::log(0.05), std::log(50.0));
  std::uniform_int_distribution<int> terms(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> a, b;
    for (int k = terms(rng); k > 0; --k) {
      a.push_back(weight(rng));
      b.push_back(std::exp(log_rate(rng)));
    }
    const auto m = mixture_of(0.3, a, b);
    for (int p : {1, 2, 3}) {
      const double expected = std::pow(multinomial_integral(a, b, p), 1.0 / p);
      EXPECT_NEAR(decaying_lp_norm(m, p), expected, 1e-9 * std::max(1.0, expected)) << "p=" << p;
    }
  }
}

TEST(LpNorm, SignChangingDecayingPart) {
  // f = e^{-t} - e^{-2t} - 0.5 e^{-3t} crosses zero; compare with a fine
  // trapezoid sum of |f| on [0, 60].
  const auto m = mixture_of(0.0, {1.0, -1.0, -0.5}, {1.0, 2.0, 3.0});
  const int steps = 2'000'000;
  const double h = 60.0 / steps;
  double trap = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    trap += w * std::abs(m.decaying_part(k * h));
  }
  trap *= h;
  EXPECT_NEAR(decaying_lp_norm(m, 1.0), trap, 1e-9);
}

TEST(LpNormProperty, SingleTermNormAgainstClosedForm) {
  // (a^p / (p rate))^{1/p}: non-increasing in p while p rate <= e, rising after.
  for (double a : {0.1, 0.5, 1.0})
    for (double rate : {0.05, 0.3, 4.0}) {
      const auto m = mixture_of(0.0, {a}, {rate});
      double previous = std::numeric_limits<double>::infinity();
      for (double p = 1.0; p <= 12.0; p += 0.5) {
        const double v = decaying_lp_norm(m, p);
        EXPECT_NEAR(v, a * std::pow(p * rate, -1.0 / p), 1e-11);
        if (p * rate <= std::exp(1.0)) EXPECT_LE(v, previous + 1e-14) << "p " << p << " rate " << rate;
        else if ((p - 0.5) * rate >= std::exp(1.0)) EXPECT_GT(v, previous) << "p " << p << " rate " << rate;
        previous = v;
      }
    }
}

TEST(LpNormProperty, ClassificationInvariantUnderTimeRescaling) {
  std::mt19937_64 rng(17);
  const std::vector<double> ps{1.0, 2.0};
  for (int trial = 0; trial < 40; ++trial) {
    const auto gen = oracle::random_generator(rng, {.max_states = 6, .min_rate = 0.1, .max_rate = 10.0});
    const auto init = oracle::random_distribution(rng, gen.size());
    const auto scaled = validate_generator(Matrix(gen.rates() * 3.0), gen.states());
    const auto a = classify(gen, init, ps), b = classify(scaled, init, ps);
    EXPECT_EQ(a.integrable_class, b.integrable_class);
    EXPECT_NEAR(a.c, b.c, 1e-12);
    EXPECT_NEAR(a.sup_norm, b.sup_norm, 1e-9);
    EXPECT_GE(a.sup_norm, std::abs(a.c));
    EXPECT_GE(a.sup_norm + 1e-12, second_moment(init, gen.states()));
    if (a.mixture_available && b.mixture_available)
      for (double p : ps)  // int |f(3 t)|^p dt = (1/3) int |f|^p
        EXPECT_NEAR(b.f_lp_values.at(p), a.f_lp_values.at(p) * std::pow(3.0, -1.0 / p),
                    1e-8 * std::max(1.0, a.f_lp_values.at(p)));
  }
}

TEST(LpNorm, ZeroMeanNonUniformEquilibriumIsReported) {
  // Birth-death chain on {-2,-1,1,2} with symmetric but non-uniform
  // stationary law (0.1, 0.4, 0.4, 0.1).
  Matrix q(4, 4);
  q << -4, 4, 0, 0,  //
      1, -2, 1, 0,   //
      0, 1, -2, 1,   //
      0, 0, 4, -4;
  const auto gen = validate_generator(q, StateSpace({-2.0, -1.0, 1.0, 2.0}));
  const auto pi = stationary_distribution(gen);
  EXPECT_NEAR(pi[0], 0.1, 1e-12);
  EXPECT_TRUE(zero_mean_nonuniform_equilibrium(gen));
  EXPECT_FALSE(zero_mean_nonuniform_equilibrium(unit_chain(1.0, 1.0)));
  EXPECT_FALSE(zero_mean_nonuniform_equilibrium(unit_chain(1.0, 3.0)));
}
