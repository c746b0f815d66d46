#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <set>

#include "species/random.hpp"
#include "species/stable.hpp"

using namespace species;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

// Philox4x32-10 known-answer vector from the Random123 distribution.
TEST(Philox, KnownAnswer) {
  const auto out = detail::philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(RandomState, ReproducibleAndSplit) {
  RandomState a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  std::set<std::uint64_t> firsts;
  const RandomState root(7);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RandomState child = root.split(i);
    RandomState again = root.split(i);
    const auto v = child();
    EXPECT_EQ(v, again());
    firsts.insert(v);
  }
  EXPECT_EQ(firsts.size(), 1000u);
  EXPECT_EQ(a.position(), 100u);
}

TEST(RandomState, UniformMoments) {
  RandomState rng(3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 0.003);
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.003);
}

TEST(StableDensity, HalfClosedForm) {
  // f_{1/2}(x) = x^{-3/2} e^{-1/(4x)} / (2√π)
  EXPECT_LT(rel(stable_density(1.0, 0.5), 0.21969564473386120), 1e-15);
  for (double x : {0.01, 0.1, 1.0, 10.0, 1000.0}) {
    EXPECT_LT(rel(stable_density_zolotarev(x, 0.5), stable_density(x, 0.5)), 1e-10) << x;
  }
}

// scipy.stats.levy_stable with alpha = σ, beta = 1 and scale cos(πσ/2)^{1/σ}.
TEST(StableDensity, ReferenceValues) {
  EXPECT_LT(rel(stable_density(1.0, 0.3), 0.11715700256591623), 1e-9);
  EXPECT_LT(rel(stable_density(1.0, 0.7), 0.3873950101465926), 1e-9);
  EXPECT_LT(rel(stable_cdf(2.0, 0.7), 0.7420793775652204), 1e-9);
}

TEST(StableDensity, IntegratesToOne) {
  boost::math::quadrature::exp_sinh<double> es;
  for (double sigma : {0.3, 0.5, 0.7}) {
    const double total =
        es.integrate([&](double x) { return stable_density(x, sigma); }, 0.0, std::numeric_limits<double>::infinity(),
                     1e-10);
    EXPECT_NEAR(total, 1.0, 1e-6) << sigma;
  }
}

TEST(StableDensity, CdfMatchesErfcAtHalf) {
  for (double x : {0.05, 0.5, 2.0, 30.0}) EXPECT_NEAR(stable_cdf(x, 0.5), std::erfc(0.5 / std::sqrt(x)), 1e-14);
}

TEST(StableDensity, CdfDerivativeIsDensity) {
  const double h = 1e-4;
  for (double sigma : {0.3, 0.7}) {
    for (double x : {0.5, 1.0, 3.0}) {
      const double slope = (stable_cdf(x + h, sigma) - stable_cdf(x - h, sigma)) / (2.0 * h);
      EXPECT_LT(rel(slope, stable_density(x, sigma)), 1e-6) << sigma << " " << x;
    }
  }
}

TEST(StableDensity, Domain) {
  EXPECT_EQ(stable_density(0.0, 0.5), 0.0);
  EXPECT_EQ(stable_density(-1.0, 0.3), 0.0);
  EXPECT_THROW(stable_density(1.0, 1.0), DomainError);
  EXPECT_THROW(stable_density(1.0, 0.0), DomainError);
}
