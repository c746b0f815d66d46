// A sample of n = 10 draws showed j = 5 distinct species. How many new
// species will the next m draws reveal under an NGG(1/2, 1) prior?

#include <cstdio>

#include "species/species.hpp"

int main() {
  using namespace species;
  const ModelParams prior = ModelParams::ngg(0.5, 1.0);
  const SampleSummary sample{10, 5};

  for (long m : {10L, 100L, 1000L}) {
    const PosteriorPMF pmf = exact_pmf(prior, sample, m);
    const HpdInterval hpd = hpd_interval(pmf, 0.95);
    std::printf("m = %5ld  E[K] = %8.3f  95%% HPD = [%ld, %ld] (mass %.4f)\n", m, posterior_mean(pmf), hpd.lo,
                hpd.hi, hpd.mass);
  }

  // Beyond the exact range the m^sigma limit law takes over.
  const long m = 1000000;
  const AsymptoticEstimate est = approximate_posterior(prior, sample, m, 0.05, 100000, RandomState(42));
  std::printf("m = %ld  E[K] ~ %.1f  95%% interval ~ [%.1f, %.1f]  (Monte Carlo s.e. %.2f)\n", m, est.point,
              est.lower, est.upper, est.mc_stderr);
  return 0;
}
