#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <vector>

#include "species/alternating_sum.hpp"
#include "species/bigreal.hpp"
#include "species/factorial.hpp"
#include "species/incomplete_gamma.hpp"

using namespace species;
using boost::multiprecision::cpp_rational;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST(BigReal, ArithmeticAndRounding) {
  const BigReal x(2.5, 128);
  EXPECT_EQ(floor(x).to_double(), 2.0);
  EXPECT_EQ(ceil(x).to_double(), 3.0);
  EXPECT_EQ(floor(-x).to_double(), -3.0);
  EXPECT_DOUBLE_EQ((x * x - 1.0).to_double(), 5.25);
  EXPECT_NEAR(exp(log(x)).to_double(), 2.5, 1e-15);
  EXPECT_THROW(BigReal(1.0, 1), DomainError);
}

TEST(BigReal, ExactSumKeepsCancelledBits) {
  const long prec = 128;
  std::vector<BigReal> terms{BigReal(1e300, prec), BigReal(1.0, prec), BigReal(-1e300, prec)};
  EXPECT_EQ(exact_sum(terms, prec).to_double(), 1.0);
}

TEST(RisingFactorial, SmallValues) {
  EXPECT_EQ(rising_factorial(3.0, 4).to_double(), 360.0);
  EXPECT_EQ(rising_factorial(0.5, 0).to_double(), 1.0);
  EXPECT_DOUBLE_EQ(rising_factorial(0.5, 3).to_double(), 0.5 * 1.5 * 2.5);
  EXPECT_THROW(rising_factorial(1.0, -1), DomainError);
}

// Reference values computed with mpmath.gammainc at 50 digits.
TEST(IncompleteGamma, ReferenceValues) {
  EXPECT_LT(rel(upper_incomplete_gamma(0.0, 1.0).to_double(), 0.21938393439552027), 1e-15);
  EXPECT_LT(rel(upper_incomplete_gamma(-0.5, 1.0).to_double(), 0.17814771178156069), 1e-15);
  EXPECT_LT(rel(upper_incomplete_gamma(-1.0, 1.0).to_double(), 0.14849550677592205), 1e-15);
  EXPECT_LT(rel(upper_incomplete_gamma(-7.3, 0.1).to_double(), 2434602.1060328417), 1e-15);
  EXPECT_LT(rel(upper_incomplete_gamma(3.5, 50.0).to_double(), 3.5852242711125375e-18), 1e-15);
}

TEST(IncompleteGamma, RecurrenceResidual) {
  const long prec = 256;
  const double bound = std::ldexp(1.0, -(prec - 8));
  for (double x : {0.1, 1.0, 10.0}) {
    for (int i = 0; i <= 80; ++i) {
      const double a = -10.0 + 0.25 * i + 0.01;
      const BigReal ga = upper_incomplete_gamma(a, x, prec);
      const BigReal xx(x, prec), aa(a, prec);
      const BigReal ga1 = upper_incomplete_gamma(aa + 1.0, xx, prec);
      // Γ(a+1; x) = a Γ(a; x) + x^a e^{-x}
      const BigReal rhs = aa * ga + pow(xx, aa) * exp(-xx);
      EXPECT_LT(relative_difference(ga1, rhs), bound) << "a=" << a << " x=" << x;
    }
  }
}

TEST(IncompleteGamma, LadderMatchesSinglePoints) {
  const long prec = 192;
  const BigReal top(4.0 - 1.0 / 3.0, prec), x(2.0, prec);
  const auto ladder = upper_incomplete_gamma_ladder(top, 12, x, prec);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const BigReal a = top - static_cast<double>(i);
    EXPECT_LT(relative_difference(ladder[i], upper_incomplete_gamma(a, x, prec)), 1e-50);
  }
}

TEST(IncompleteGamma, LargeArgumentStaysFast) {
  const BigReal v = upper_incomplete_gamma(3.5, 250000.0);
  EXPECT_GT(v.sign(), 0);
  EXPECT_LT(v.log_abs(), -249000.0);
}

TEST(IncompleteGamma, RejectsNonPositiveArgument) {
  EXPECT_THROW(upper_incomplete_gamma(1.0, 0.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(1.0, -1.0), DomainError);
}

// Coefficients solved exactly from (σt + r)_n = Σ_k 𝒢(n, k) (t)_k at
// t = 0, -1, ..., -n, where (-x)_k = (-1)^k x! / (x - k)! vanishes for k > x.
TEST(GeneralizedFactorial, GeneratingIdentityInRationals) {
  const cpp_rational sigma(1, 2), r(3, 4);
  for (long n = 0; n <= 8; ++n) {
    std::vector<cpp_rational> g(static_cast<std::size_t>(n + 1));
    for (long x = 0; x <= n; ++x) {
      cpp_rational lhs = 1;
      for (long i = 0; i < n; ++i) lhs *= sigma * cpp_rational(-x) + r + i;
      cpp_rational rhs = 0;
      for (long k = 0; k < x; ++k) {
        cpp_rational fall = 1;
        for (long i = 0; i < k; ++i) fall *= cpp_rational(-x + i);
        rhs += g[static_cast<std::size_t>(k)] * fall;
      }
      cpp_rational fall_x = 1;
      for (long i = 0; i < x; ++i) fall_x *= cpp_rational(-x + i);
      g[static_cast<std::size_t>(x)] = (lhs - rhs) / fall_x;
    }
    const auto row = gfc_row(n, BigReal(0.5, 256), BigReal(0.75, 256));
    ASSERT_EQ(row.size(), g.size());
    for (long k = 0; k <= n; ++k) {
      const double exact = static_cast<double>(g[static_cast<std::size_t>(k)]);
      const double got = row[static_cast<std::size_t>(k)].to_double();
      if (exact == 0.0) {
        EXPECT_EQ(got, 0.0);
      } else {
        EXPECT_LT(rel(got, exact), 1e-15) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(GeneralizedFactorial, TableAndErrors) {
  const GfcTable table(BigReal(0.3, 128), BigReal(2.0, 128), 6);
  EXPECT_DOUBLE_EQ(table(1, 1).to_double(), 0.3);
  EXPECT_DOUBLE_EQ(table(1, 0).to_double(), 2.0);
  EXPECT_DOUBLE_EQ(table(6, 6).to_double(), std::pow(0.3, 6));
  EXPECT_THROW(table(7, 1), IndexError);
  EXPECT_THROW(table(3, 4), IndexError);
  EXPECT_THROW(gfc(3, 4, 0.5, 1.0), IndexError);
  EXPECT_THROW(gfc(3, 1, 1.5, 1.0), DomainError);
}

TEST(AlternatingSum, BinomialCancellation) {
  // Σ_k (-1)^k C(n, k) / (k + 1) = 1 / (n + 1), with terms up to 2^76.
  const long n = 80, prec = 512;
  std::vector<BigReal> terms;
  BigReal binom = BigReal::from_long(1, prec);
  for (long k = 0; k <= n; ++k) {
    BigReal t = binom / static_cast<double>(k + 1);
    terms.push_back(k % 2 == 0 ? t : -t);
    binom *= static_cast<double>(n - k);
    binom /= static_cast<double>(k + 1);
  }
  EXPECT_LT(rel(exact_sum(terms, prec).to_double(), 1.0 / 81.0), 1e-15);

  const std::vector<SignedLogTerm> logs{{1, std::log(3.0)}, {-1, std::log(2.0)}, {0, 100.0}};
  EXPECT_NEAR(signed_alternating_sum(logs).to_double(), 1.0, 1e-15);
}

// I(5, 3) at σ = 1/2, β = 1 from mpmath quadrature of the integral form.
TEST(AlternatingSum, IncompleteGammaSumReference) {
  const IncompleteGammaSums sums(0.5, 1.0, 5, 3, 3, 256);
  EXPECT_LT(rel(sums.sum(5, 3).to_double(), 0.97408755727067608), 1e-15);
}

TEST(AlternatingSum, AdaptivePrecisionGivesUp) {
  int calls = 0;
  auto compute = [&](long bits) {
    ++calls;
    return static_cast<double>(bits);
  };
  EXPECT_THROW(adaptive_precision(64, compute, [](double a, double b) { return std::fabs(a - b); }, 1e-12, 1024),
               ConvergenceError);
  EXPECT_EQ(calls, 5);
}
