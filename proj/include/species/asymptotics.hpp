#pragma once

// Large-m approximation of K_m given (n, j): K_m / m^σ converges to Z_{n,j}
// (NGG) or Z'_{n,j} (PD), so K_m ≈ m^σ Z.
//
// Both limits are B_{a,b} · Y_q with a + b = q, possibly exponentially tilted;
// the untilted density is
//
//   g(z) = Γ(qσ+1) / (σ q Γ(a) Γ(b)) · z^{a-1} ∫_z^∞ (v - z)^{b-1} v^{-1/σ} f_σ(v^{-1/σ}) dv,
//
// and for NGG f_Z(z) = exp(-(β/z)^{1/σ}) g(z) / c with c the acceptance rate.
// At σ = 1/2 with integral b the v-integral is a finite sum of incomplete
// gamma functions.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "species/bigreal.hpp"
#include "species/incomplete_gamma.hpp"
#include "species/laplace.hpp"
#include "species/params.hpp"
#include "species/random.hpp"
#include "species/samplers.hpp"
#include "species/stable.hpp"

namespace species {

struct AsymptoticEstimate {
  long m = 0;
  double alpha = 0.05;
  double point = 0.0;  // m^σ · mean of the limit draws
  double lower = 0.0;  // m^σ · alpha/2 quantile
  double upper = 0.0;  // m^σ · (1 - alpha/2) quantile
  long mc_samples = 0;
  double mc_stderr = 0.0;
  double norm_const = 1.0;    // acceptance rate of the limit sampler
};

namespace detail {

struct BetaMlShape {
  double a, b, q;   // S = B_{a,b} Y_q
  double log_c;     // log of the tilt normalizer (0 without tilt)
  double tau;       // exponential tilt of S^{-1/σ}
};

inline BetaMlShape limit_shape(const ModelParams& params, const SampleSummary& sample) {
  params.validate();
  sample.validate();
  const double n = static_cast<double>(sample.n), j = static_cast<double>(sample.j), s = params.sigma;
  if (params.family == Family::PD) return {j + params.theta / s, n / s - j, (params.theta + n) / s, 0.0, 0.0};
  const double log_c = params.beta == 0.0 ? 0.0 : log_posterior_stable_laplace(sample, s, params.tau());
  return {j, n / s - j, n / s, log_c, params.tau()};
}

inline double log_shape_prefactor(const BetaMlShape& sh, double sigma) {
  return std::lgamma(sh.q * sigma + 1.0) - std::log(sigma * sh.q) - std::lgamma(sh.a) - std::lgamma(sh.b);
}

// log of the tilt factor exp(-τ z^{-1/σ}) divided by the normalizer.
inline double log_tilt(const BetaMlShape& sh, double z, double sigma) {
  return (sh.tau == 0.0 ? 0.0 : -sh.tau * std::pow(z, -1.0 / sigma)) - sh.log_c;
}

}  // namespace detail

/// f_Z(z) through quadrature of the v-integral with f_σ from stable_density.
inline double limit_density_quadrature(double z, const ModelParams& params, const SampleSummary& sample) {
  if (!(z > 0.0) || !std::isfinite(z)) return 0.0;
  const auto sh = detail::limit_shape(params, sample);
  const double sigma = params.sigma;
  const double log_tilt = detail::log_tilt(sh, z, sigma);
  if (log_tilt < -1000.0) return 0.0;
  // ∫_0^∞ s^{b-1} h(z + s) ds with h(v) = v^{-1/σ} f_σ(v^{-1/σ}); for b < 1 the
  // substitution s = u^{1/b} removes the endpoint singularity.
  auto h = [&](double v) { return std::pow(v, -1.0 / sigma) * stable_density(std::pow(v, -1.0 / sigma), sigma); };
  const double tol = 1e-10;
  double integral;
  boost::math::quadrature::exp_sinh<double> es;
  using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (sh.b < 1.0) {
    auto g = [&](double u) {
      if (!(u > 0.0) || !std::isfinite(u)) return 0.0;
      const double s = std::pow(u, 1.0 / sh.b);
      return std::isfinite(s) ? h(z + s) / sh.b : 0.0;
    };
    const double split = std::pow(std::max(1.0, z), sh.b);
    integral = GaussKronrod::integrate(g, 0.0, split, 20, tol) +
               es.integrate([&](double u) { return g(split + u); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  } else {
    auto g = [&](double s) {
      if (!(s > 0.0) || !std::isfinite(s)) return 0.0;
      const double hv = h(z + s);
      return hv > 0.0 ? std::exp((sh.b - 1.0) * std::log(s) + std::log(hv)) : 0.0;
    };
    const double split = std::max(1.0, z);
    integral = GaussKronrod::integrate(g, 0.0, split, 20, tol) +
               es.integrate([&](double u) { return g(split + u); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  }
  if (!(integral > 0.0)) return 0.0;
  const double log_f = detail::log_shape_prefactor(sh, sigma) + (sh.a - 1.0) * std::log(z) + std::log(integral) + log_tilt;
  return std::exp(log_f);
}

/// f_Z(z) at σ = 1/2, where with N = b - 1 a nonnegative integer
///   ∫_z^∞ (v - z)^N v^{-2} f_{1/2}(v^{-2}) dv
///     = (1/(2√π)) Σ_{l=0}^N C(N, l) (-z)^l 2^{N-l+1} Γ((N-l)/2 + 1; z²/4).
inline double limit_density_half(double z, const ModelParams& params, const SampleSummary& sample,
                                 long precision_bits = kDefaultPrecisionBits) {
  if (params.sigma != 0.5) throw DomainError("limit_density_half: requires sigma = 1/2");
  if (!(z > 0.0) || !std::isfinite(z)) return 0.0;
  const auto sh = detail::limit_shape(params, sample);
  const double nd = sh.b - 1.0;
  const long big_n = std::lround(nd);
  if (std::fabs(nd - static_cast<double>(big_n)) > 1e-12 || big_n < 0) {
    throw DomainError("limit_density_half: requires an integral second beta parameter");
  }
  auto compute = [&](long bits) {
    const long w = bits + 32;
    BigReal zz(z, w);
    BigReal x = zz * zz / 4.0;
    std::vector<BigReal> terms;
    BigReal binom = BigReal::from_long(1, w);
    BigReal zpow = BigReal::from_long(1, w);
    for (long l = 0; l <= big_n; ++l) {
      BigReal a = BigReal::from_long(big_n - l, w) / 2.0 + 1.0;
      BigReal t = binom * zpow * pow(BigReal(2.0, w), big_n - l + 1) * upper_incomplete_gamma(a, x, w);
      terms.push_back(l % 2 == 0 ? t : -t);
      binom *= static_cast<double>(big_n - l);
      binom /= static_cast<double>(l + 1);
      zpow *= zz;
    }
    BigReal v = exact_sum(terms, w) / (sqrt(pi(w)) * 2.0);
    mpfr_prec_round(v.raw(), bits, MPFR_RNDN);
    return v;
  };
  const BigReal integral = adaptive_precision(
      precision_bits, compute, [](const BigReal& a, const BigReal& b) { return relative_difference(a, b); });
  if (!(integral.sign() > 0)) return 0.0;
  const double log_f = detail::log_shape_prefactor(sh, 0.5) + (sh.a - 1.0) * std::log(z) + integral.log_abs() +
                       detail::log_tilt(sh, z, 0.5);
  return std::exp(log_f);
}

/// Density of the limit variable Z_{n,j} (NGG) or Z'_{n,j} (PD).
inline double limit_density(double z, const ModelParams& params, const SampleSummary& sample) {
  if (params.sigma == 0.5) {
    const auto sh = detail::limit_shape(params, sample);
    if (std::fabs(sh.b - std::round(sh.b)) < 1e-12 && sh.b >= 1.0) return limit_density_half(z, params, sample);
  }
  return limit_density_quadrature(z, params, sample);
}

/// Type-7 quantile (linear interpolation of order statistics) of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile_sorted: empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// K_m ≈ m^σ Z from n_draws Monte Carlo draws of the limit variable, draw i
/// taken from rng.split(i).
inline AsymptoticEstimate approximate_posterior(const ModelParams& params, const SampleSummary& sample, long m,
                                                double alpha, long n_draws, const RandomState& rng) {
  params.validate();
  sample.validate();
  if (m < 1) throw DomainError("approximate_posterior: m must be >= 1");
  if (n_draws < 1000) throw DomainError("approximate_posterior: n_draws must be >= 1000");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("approximate_posterior: alpha must lie in (0, 1)");
  const LimitLaw law = make_limit_law(params, sample);
  std::vector<double> z = sample_limit_replications(law, static_cast<std::size_t>(n_draws), rng);
  long double sum = 0.0L, sum_sq = 0.0L;
  for (double v : z) {
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
  }
  const long double nd = static_cast<long double>(n_draws);
  const double mean = static_cast<double>(sum / nd);
  const double var = static_cast<double>(std::max(0.0L, (sum_sq - sum * sum / nd) / (nd - 1.0L)));
  std::sort(z.begin(), z.end());
  const double scale = std::pow(static_cast<double>(m), params.sigma);
  AsymptoticEstimate est;
  est.m = m;
  est.alpha = alpha;
  est.point = scale * mean;
  est.lower = scale * quantile_sorted(z, alpha / 2.0);
  est.upper = scale * quantile_sorted(z, 1.0 - alpha / 2.0);
  est.mc_samples = n_draws;
  est.mc_stderr = scale * std::sqrt(var / static_cast<double>(n_draws));
  est.norm_const = law.norm_const.to_double();
  return est;
}

}  // namespace species
