#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "species/asymptotics.hpp"
#include "species/posterior.hpp"

using namespace species;

namespace {

double integrate_density(const ModelParams& p, const SampleSummary& s, double tol) {
  boost::math::quadrature::exp_sinh<double> es(6);
  return es.integrate([&](double z) { return limit_density(z, p, s); }, 0.0, std::numeric_limits<double>::infinity(),
                      tol);
}

}  // namespace

TEST(LimitDensity, HalfSumMatchesQuadrature) {
  for (const auto& p : {ModelParams::ngg(0.5, 1.0), ModelParams::ngg(0.5, 4.0), ModelParams::pd(0.5, 0.7)}) {
    double sup = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double z = 0.06 * i;
      sup = std::max(sup, std::fabs(limit_density_half(z, p, {5, 3}) - limit_density_quadrature(z, p, {5, 3})));
    }
    EXPECT_LT(sup, 1e-9);
  }
  EXPECT_THROW(limit_density_half(1.0, ModelParams::ngg(0.4, 1.0), {5, 3}), DomainError);
}

TEST(LimitDensity, IntegratesToOne) {
  EXPECT_NEAR(integrate_density(ModelParams::ngg(0.5, 1.0), {5, 3}, 1e-10), 1.0, 1e-6);
  EXPECT_NEAR(integrate_density(ModelParams::pd(0.5, 0.7), {5, 3}, 1e-10), 1.0, 1e-6);
  EXPECT_NEAR(integrate_density(ModelParams::pd(0.5, -0.2), {4, 1}, 1e-10), 1.0, 1e-6);
  EXPECT_NEAR(integrate_density(ModelParams::ngg(0.75, 1.0), {5, 3}, 1e-8), 1.0, 1e-6);
  EXPECT_NEAR(integrate_density(ModelParams::pd(0.75, 0.5), {5, 3}, 1e-8), 1.0, 1e-6);
}

TEST(LimitDensity, MeanMatchesSampler) {
  const ModelParams p = ModelParams::ngg(0.5, 1.0);
  boost::math::quadrature::exp_sinh<double> es;
  const double mean = es.integrate([&](double z) { return z * limit_density(z, p, {5, 3}); }, 0.0,
                                   std::numeric_limits<double>::infinity(), 1e-10);
  const auto est = approximate_posterior(p, {5, 3}, 1, 0.05, 200000, RandomState(3));
  EXPECT_LT(std::fabs(est.point - mean), 4.0 * est.mc_stderr);
}

TEST(StableLaplace, MonteCarloIdentity) {
  // L = S^{-1/σ} with S the untilted limit variable; E[e^{-λL}] is the
  // conditional Laplace transform of the stable total mass.
  const SampleSummary s{5, 3};
  const LimitLaw law = make_limit_law(ModelParams::ngg(0.5, 0.0), s);
  const auto z = sample_limit_replications(law, 1000000, RandomState(40));
  for (double lambda : {0.5, 1.0, 2.0}) {
    long double acc = 0.0L;
    for (double v : z) acc += std::exp(-lambda * std::pow(v, -2.0));
    const double mc = static_cast<double>(acc / z.size());
    EXPECT_NEAR(mc / posterior_stable_laplace(s, 0.5, lambda), 1.0, 0.005) << lambda;
  }
}

TEST(ApproximatePosterior, QuantileCoverageAgainstExact) {
  const ModelParams p = ModelParams::ngg(0.5, 1.0);
  const auto pmf = exact_pmf(p, {10, 5}, 500);
  const auto est = approximate_posterior(p, {10, 5}, 500, 0.05, 100000, RandomState(8));
  double mass = 0.0;
  for (long k = 0; k <= 500; ++k) {
    if (k >= est.lower && k <= est.upper) mass += pmf[k];
  }
  EXPECT_GE(mass, 0.90);
  EXPECT_LT(est.lower, est.point);
  EXPECT_LT(est.point, est.upper);
}

TEST(ApproximatePosterior, ReproducibleAndValidated) {
  const ModelParams p = ModelParams::pd(0.5, 1.0);
  const auto a = approximate_posterior(p, {10, 5}, 20000, 0.1, 5000, RandomState(4));
  const auto b = approximate_posterior(p, {10, 5}, 20000, 0.1, 5000, RandomState(4));
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  EXPECT_EQ(a.norm_const, 1.0);
  EXPECT_THROW(approximate_posterior(p, {10, 5}, 100, 0.1, 999, RandomState(4)), DomainError);
  EXPECT_THROW(approximate_posterior(p, {10, 5}, 100, 1.0, 5000, RandomState(4)), DomainError);
  EXPECT_THROW(approximate_posterior(p, {10, 5}, 0, 0.1, 5000, RandomState(4)), DomainError);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.25), 1.75);
  EXPECT_THROW(quantile_sorted({}, 0.5), DomainError);
}
