#include <gtest/gtest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "species/alternating_sum.hpp"
#include "species/laplace.hpp"
#include "species/posterior.hpp"
#include "species/samplers.hpp"

using namespace species;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(ExactPmf, OneStepReference) {
  const auto pmf = exact_pmf(ModelParams::ngg(0.5, 1.0), {1, 1}, 1);
  ASSERT_EQ(pmf.probs.size(), 2u);
  EXPECT_LT(rel(pmf[0], 0.29817368116159704), 1e-14);
  EXPECT_LT(rel(pmf[1], 0.70182631883840296), 1e-15);
  const auto pd = exact_pmf(ModelParams::pd(0.5, 0.5), {1, 1}, 1);
  EXPECT_DOUBLE_EQ(pd[1], 1.0 / 1.5);
}

TEST(ExactPmf, PdTwoStepsByHand) {
  // From (n, j) = (2, 1) under PD(σ, θ): P(K = 2) = (θ+σ)/(θ+2) · (θ+2σ)/(θ+3).
  const double s = 0.3, t = 1.2;
  const auto pmf = exact_pmf(ModelParams::pd(s, t), {2, 1}, 2);
  EXPECT_NEAR(pmf[2], (t + s) / (t + 2) * (t + 2 * s) / (t + 3), 1e-15);
  EXPECT_NEAR(pmf[0], (2 - s) / (t + 2) * (3 - s) / (t + 3), 1e-15);
}

TEST(ExactPmf, NormalizedAndMatchesRecursion) {
  for (const auto& p : {ModelParams::ngg(0.25, 0.5), ModelParams::ngg(0.75, 5.0), ModelParams::pd(0.5, -0.3)}) {
    for (long m : {1L, 7L, 40L}) {
      const auto pmf = exact_pmf(p, {6, 2}, m);
      EXPECT_NEAR(pmf.total(), 1.0, 1e-12);
      EXPECT_LT(max_abs_diff(pmf.probs, dp_oracle_pmf(p, {6, 2}, m).probs), 1e-12);
    }
  }
}

TEST(ExactPmf, AlternatingAndIntegralRoutesAgree) {
  const ModelParams p = ModelParams::ngg(0.5, 1.0);
  const auto alt = exact_pmf(p, {10, 5}, 300);
  const auto integral = detail::ngg_integral_pmf(p, {10, 5}, 300);
  EXPECT_LT(max_abs_diff(alt.probs, integral), 1e-12);
  const auto big = exact_pmf(ModelParams::ngg(0.25, 2.0), {20, 7}, 2000);
  EXPECT_NEAR(big.total(), 1.0, 1e-10);
}

TEST(ExactPmf, RefusesHugeAdditionalSample) {
  EXPECT_THROW(exact_pmf(ModelParams::ngg(0.5, 1.0), {3, 2}, 10001), DomainError);
  EXPECT_THROW(exact_pmf(ModelParams::ngg(0.5, 1.0), {3, 2}, -1), DomainError);
  EXPECT_EQ(exact_pmf(ModelParams::ngg(0.5, 1.0), {3, 2}, 0).probs, std::vector<double>{1.0});
}

TEST(PosteriorMean, NondecreasingInM) {
  for (const auto& p : {ModelParams::ngg(0.5, 1.0), ModelParams::pd(0.25, 3.0)}) {
    double prev = 0.0;
    for (long m = 0; m <= 60; m += 5) {
      const double mean = posterior_mean(exact_pmf(p, {10, 5}, m));
      EXPECT_GE(mean, prev);
      prev = mean;
    }
  }
}

TEST(Hpd, MinimalByExhaustiveScan) {
  const auto pmf = exact_pmf(ModelParams::ngg(0.5, 2.0), {8, 3}, 60);
  for (double alpha : {0.5, 0.8, 0.95, 0.99}) {
    const HpdInterval hpd = hpd_interval(pmf, alpha);
    EXPECT_GE(hpd.mass, alpha - 1e-12);
    long best = pmf.m + 1;
    for (long lo = 0; lo <= pmf.m; ++lo) {
      double mass = 0.0;
      for (long hi = lo; hi <= pmf.m; ++hi) {
        mass += pmf[hi];
        if (mass >= alpha - 1e-12) {
          best = std::min(best, hi - lo);
          break;
        }
      }
    }
    EXPECT_EQ(hpd.hi - hpd.lo, best) << alpha;
  }
  EXPECT_THROW(hpd_interval(pmf, 0.0), DomainError);
}

// mpmath references: Γ(0; 1) at n = 2, j = 1 and I(10, 5) / Γ(5).
TEST(StableLaplace, ReferenceValues) {
  EXPECT_LT(rel(posterior_stable_laplace({2, 1}, 0.5, 1.0), 0.21938393439552027), 1e-13);
  EXPECT_LT(rel(posterior_stable_laplace({1, 1}, 0.5, 1.0), std::exp(-1.0)), 1e-13);
  EXPECT_LT(rel(make_limit_law(ModelParams::ngg(0.5, 1.0), {10, 5}).norm_const.to_double(), 0.59215421123895096),
            1e-15);
  EXPECT_EQ(posterior_stable_laplace({4, 2}, 0.5, 0.0), 1.0);
}

TEST(StableLaplace, MatchesAlternatingSums) {
  for (auto [n, k, s, b] : std::vector<std::tuple<long, long, double, double>>{
           {60, 3, 0.25, 5.0}, {60, 40, 0.75, 0.5}, {200, 100, 0.5, 1.0}, {30, 1, 0.25, 0.5}}) {
    const IncompleteGammaSums sums(s, b, n, k, k, 2048);
    const double ref = sums.sum(n, k).log_abs() - std::lgamma(static_cast<double>(k));
    const double quad = log_posterior_stable_laplace({n, k}, s, std::pow(b, 1.0 / s));
    EXPECT_LT(std::fabs(std::expm1(quad - ref)), 1e-12) << n << " " << k;
  }
}
