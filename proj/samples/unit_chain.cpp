// Exact and simulated autocorrelation of the two-state chain on {+1, -1}.

#include <cstdio>
#include <vector>

#include "ctmc_acf/ctmc_acf.hpp"

int main() {
  const auto gen = ctmc::unit_chain(1.0, 3.0);
  const auto pi = ctmc::stationary_distribution(gen);

  const auto mixture = ctmc::acf_mixture(gen, pi);
  std::printf("R(tau) = %.6f", mixture.constant_c);
  for (const auto& t : mixture.terms) std::printf(" + %.6f exp(%.6f tau)", t.weight.real(), t.rate.real());
  std::printf("\n");

  const std::vector<double> lags{0.0, 0.25, 0.5, 1.0};
  const auto est = ctmc::empirical_acf(gen, pi, lags, 20000, 2.5, 42);
  std::printf("%6s %12s %12s %10s\n", "tau", "exact", "simulated", "stderr");
  for (std::size_t k = 0; k < lags.size(); ++k)
    std::printf("%6.2f %12.6f %12.6f %10.6f\n", lags[k], ctmc::acf_value(gen, pi, lags[k]), est.estimates[k],
                est.std_errors[k]);

  const std::vector<double> ps{1.0, 2.0};
  const auto report = ctmc::classify(gen, pi, ps);
  std::printf("class %s, sup|R| = %.6f\n", ctmc::lp_class_name(report.integrable_class).data(), report.sup_norm);
}
