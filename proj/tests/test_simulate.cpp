#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ctmc_acf/acf.hpp"
#include "ctmc_acf/simulate.hpp"
#include "test_support.hpp"

using namespace ctmc;

namespace {

ProbVector pv(std::vector<double> p) { return ProbVector(p); }

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / double(x.size());
}

}  // namespace

TEST(CounterRng, SubstreamsAreDeterministicAndDistinct) {
  auto a = CounterRng::substream(42, 0), b = CounterRng::substream(42, 0), c = CounterRng::substream(42, 1);
  for (int k = 0; k < 10; ++k) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    EXPECT_NE(x, z);
  }
  CounterRng u(9);
  for (int k = 0; k < 100000; ++k) {
    const double v = u.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Trajectory, SameSeedSamePath) {
  const auto gen = unit_chain(1.0, 3.0);
  const auto init = stationary_distribution(gen);
  const auto a = sample_trajectory(gen, init, 10.0, 123), b = sample_trajectory(gen, init, 10.0, 123);
  EXPECT_EQ(a.jump_times, b.jump_times);
  EXPECT_EQ(a.visited_states, b.visited_states);
  const auto c = sample_trajectory(gen, init, 10.0, 124);
  EXPECT_NE(a.jump_times, c.jump_times);
}

TEST(Trajectory, StructuralInvariants) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gen = oracle::random_generator(rng, {.max_states = 5, .min_rate = 0.1, .max_rate = 10.0, .density = 0.5});
    const auto path = sample_trajectory(gen, oracle::random_distribution(rng, gen.size()), 20.0, trial);
    ASSERT_FALSE(path.jump_times.empty());
    EXPECT_EQ(path.jump_times.front(), 0.0);
    EXPECT_EQ(path.jump_times.size(), path.visited_states.size());
    EXPECT_LT(path.jump_times.back(), path.horizon);
    for (std::size_t k = 1; k < path.epochs(); ++k) {
      EXPECT_GT(path.jump_times[k], path.jump_times[k - 1]);
      EXPECT_NE(path.visited_states[k], path.visited_states[k - 1]);
      // Only positive-rate transitions occur.
      EXPECT_GT(gen(path.visited_states[k - 1], path.visited_states[k]), 0.0);
    }
  }
}

TEST(Trajectory, MeanSojournInPlusState) {
  const auto gen = unit_chain(1.0, 3.0);
  const auto path = sample_trajectory(gen, stationary_distribution(gen), 1.4e5, 77);
  const auto sojourns = stitched_sojourns(path, 0);
  ASSERT_GE(sojourns.size(), 100000u);
  // Exponential(1): mean 1, standard deviation 1.
  EXPECT_NEAR(mean(sojourns), 1.0, 3.0 / std::sqrt(double(sojourns.size())));
}

TEST(Trajectory, OccupancyConvergesToStationary) {
  const auto gen = unit_chain(1.0, 3.0);
  const auto path = sample_trajectory(gen, stationary_distribution(gen), 1e4, 5);
  const auto occ = path.occupancy(2);
  // Asymptotic variance of the occupancy fraction for a two-state chain:
  // 2 pi1 pi2 / ((alpha+beta) T).
  const double sigma = std::sqrt(2.0 * 0.75 * 0.25 / (4.0 * 1e4));
  EXPECT_NEAR(occ[0], 0.75, 3.0 * sigma);
  EXPECT_NEAR(occ[0] + occ[1], 1.0, 1e-12);
}

TEST(Sojourns, ExponentialByKolmogorovSmirnov) {
  const auto gen = unit_chain(1.0, 3.0);
  const auto path = sample_trajectory(gen, stationary_distribution(gen), 1.5e4, 2024);
  for (std::size_t state : {0u, 1u}) {
    auto s = stitched_sojourns(path, state);
    ASSERT_GE(s.size(), 10000u);
    s.resize(10000);
    EXPECT_LT(oracle::ks_exponential(s, -gen(state, state)), oracle::ks_critical_1pct(s.size()));
  }
}

TEST(Sojourns, CirculantMeanSojourn) {
  const auto gen = oracle::circulant3();
  const auto s = stitched_sojourns(sample_trajectory(gen, ProbVector::uniform(3), 3e4, 8), 0);
  EXPECT_NEAR(mean(s), 0.5, 3.0 * 0.5 / std::sqrt(double(s.size())));
}

TEST(Sojourns, SingleVisitIsInsufficient) {
  Trajectory path{{0.0, 1.0}, {0, 1}, 2.0};
  try {
    stitched_sojourns(path, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientVisits);
  }
}

TEST(EmpiricalAcf, StationaryUnitChainAtLagOne) {
  const auto gen = unit_chain(1.0, 3.0);
  const std::vector<double> lags{0.0, 1.0};
  const auto est = empirical_acf(gen, stationary_distribution(gen), lags, 100000, 3.0, 11);
  EXPECT_EQ(est.estimates[0], 1.0);  // X(0)^2 = 1 on every path
  EXPECT_EQ(est.std_errors[0], 0.0);
  EXPECT_NEAR(est.estimates[1], 0.2637367291665506, 3.0 * est.std_errors[1]);
  EXPECT_GT(est.std_errors[1], 0.0);
}

TEST(EmpiricalAcf, SymmetricRatesAtHalf) {
  const auto gen = unit_chain(2.0, 2.0);
  const std::vector<double> lags{0.5};
  const auto est = empirical_acf(gen, pv({0.5, 0.5}), lags, 100000, 1.5, 3);
  EXPECT_NEAR(est.estimates[0], std::exp(-2.0), 3.0 * est.std_errors[0]);
}

TEST(EmpiricalAcf, LagZeroIsSecondMoment) {
  const auto gen = oracle::circulant3({-1.0, 0.5, 2.0});
  const auto init = pv({0.2, 0.3, 0.5});
  const std::vector<double> lags{0.0};
  const auto est = empirical_acf(gen, init, lags, 50000, 1.0, 4);
  EXPECT_NEAR(est.estimates[0], second_moment(init, gen.states()), 3.0 * est.std_errors[0]);
}

TEST(EmpiricalAcf, ThreadCountDoesNotChangeOutput) {
  const auto gen = oracle::circulant3({-1.0, 0.5, 2.0});
  const std::vector<double> lags{0.0, 0.25, 1.0};
  const auto one = empirical_acf(gen, ProbVector::uniform(3), lags, 20000, 2.0, 99, 1);
  const auto eight = empirical_acf(gen, ProbVector::uniform(3), lags, 20000, 2.0, 99, 8);
  std::ostringstream a, b;
  write_empirical_csv(a, one);
  write_empirical_csv(b, eight);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 24), "lag,estimate,std_error,n");
}

TEST(EmpiricalAcf, RejectsShortHorizon) {
  const auto gen = unit_chain(1.0, 3.0);
  const std::vector<double> lags{2.0};
  // Longest mean sojourn is 1 (state +1), so the horizon must be >= 3.
  EXPECT_THROW(empirical_acf(gen, ProbVector::uniform(2), lags, 10, 2.5, 1), Error);
  EXPECT_NO_THROW(empirical_acf(gen, ProbVector::uniform(2), lags, 10, 3.0, 1));
  EXPECT_THROW(empirical_acf(gen, ProbVector::uniform(2), lags, 0, 3.0, 1), Error);
}

TEST(EmpiricalAcfProperty, RandomChainsWithinThreeStandardErrors) {
  std::mt19937_64 rng(8);
  const std::vector<double> lags{0.0, 0.25, 1.0, 2.0};
  int cells = 0, misses = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto gen = oracle::random_generator(rng, {.max_states = 4, .min_rate = 0.2, .max_rate = 5.0});
    const auto init = oracle::random_distribution(rng, gen.size());
    double longest = 0.0;
    for (std::size_t i = 0; i < gen.size(); ++i) longest = std::max(longest, -1.0 / gen(i, i));
    const auto est = empirical_acf(gen, init, lags, 100000, 2.0 + longest, 1000 + trial);
    for (std::size_t l = 0; l < lags.size(); ++l) {
      ++cells;
      if (std::abs(est.estimates[l] - acf_value(gen, init, lags[l])) > 3.0 * est.std_errors[l]) ++misses;
    }
  }
  // 3-sigma misses are rare; allow one in 24 cells.
  EXPECT_LE(misses, 1) << cells << " cells";
}
