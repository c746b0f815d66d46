#pragma once

// Conditional Laplace transform of the σ-stable total mass given a sample
// of size n with j species:
//
//   E[exp(-λ T) | n, j] = (1/Γ(j)) ∫_{λ^σ}^∞ y^{j-1} (1 - λ y^{-1/σ})^{n-1} e^{-y} dy.
//
// At λ = β^{1/σ} this is the normalizer of the NGG limit law, and the
// integral equals the alternating incomplete-gamma sum I(n, j) of the NGG
// Gibbs weights. The log-integrand is concave in y, so the integral is taken
// around its single mode in log space and stays finite for n, j in the
// thousands.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "species/errors.hpp"
#include "species/params.hpp"

namespace species {

namespace detail {

struct LaplaceIntegrand {
  double n1;      // n - 1
  double k1;      // j - 1
  double sigma;
  double y0;      // λ^σ, lower limit

  // log of y^{j-1} (1 - (y0/y)^{1/σ})^{n-1} e^{-(y - y0)} at y = y0 + t.
  double log_f(double t) const {
    const double y = y0 + t;
    double v = k1 * std::log(y) - t;
    if (n1 > 0.0) {
      const double g = -std::expm1(-std::log1p(t / y0) / sigma);
      v += n1 * std::log(g);
    }
    return v;
  }
  double dlog_f(double t) const {
    const double y = y0 + t;
    double d = k1 / y - 1.0;
    if (n1 > 0.0) {
      const double rest = std::exp(-std::log1p(t / y0) / sigma);  // (y0/y)^{1/σ}
      const double g = -std::expm1(-std::log1p(t / y0) / sigma);
      d += n1 * rest / (sigma * y * g);
    }
    return d;
  }
};

}  // namespace detail

/// log of (1/Γ(j)) ∫_{λ^σ}^∞ y^{j-1} (1 - λ y^{-1/σ})^{n-1} e^{-y} dy.
inline double log_posterior_stable_laplace(const SampleSummary& sample, double sigma, double lambda) {
  sample.validate();
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("posterior_stable_laplace: sigma must lie in (0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("posterior_stable_laplace: lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  const double y0 = std::pow(lambda, sigma);
  detail::LaplaceIntegrand f{static_cast<double>(sample.n - 1), static_cast<double>(sample.j - 1), sigma, y0};

  // Mode of the concave log-integrand in t = y - y0.
  double t_mode = 0.0;
  if (f.n1 > 0.0 || f.dlog_f(0.0) > 0.0) {
    double lo = 0.0, hi = std::max(1.0, f.k1 + f.n1);
    while (f.dlog_f(hi) > 0.0) hi *= 2.0;
    double lo_eval = std::max(lo, 1e-300);
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f.dlog_f(std::max(mid, lo_eval)) > 0.0 ? lo : hi) = mid;
    }
    t_mode = 0.5 * (lo + hi);
  }
  const double peak = f.log_f(t_mode);
  // Curvature scale from a central difference of the slope.
  const double h = std::max(1e-8, 1e-4 * (t_mode + y0));
  double width;
  {
    const double a = std::max(t_mode - h, 0.0);
    const double curv = (f.dlog_f(t_mode + h) - f.dlog_f(a > 0.0 ? a : t_mode)) / (t_mode + h - (a > 0.0 ? a : t_mode));
    width = curv < 0.0 ? 1.0 / std::sqrt(-curv) : std::max(1.0, t_mode);
  }
  auto integrand = [&](double t) {
    if (!(t > 0.0)) return 0.0;
    const double v = f.log_f(t) - peak;
    return v < -745.0 ? 0.0 : std::exp(v);
  };

  using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double tol = 1e-14;
  boost::math::quadrature::exp_sinh<double> es;
  double total = 0.0;
  const double left = std::max(0.0, t_mode - 40.0 * width);
  const double right = t_mode + 40.0 * width;
  if (left > 0.0) total += GaussKronrod::integrate(integrand, 0.0, left, 20, tol);
  if (t_mode > left) total += GaussKronrod::integrate(integrand, left, t_mode, 20, tol);
  total += GaussKronrod::integrate(integrand, t_mode, right, 20, tol);
  total += es.integrate([&](double s) { return integrand(right + s); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  if (!(total > 0.0) || !std::isfinite(total)) throw ConvergenceError("posterior_stable_laplace: quadrature failed");
  return peak + std::log(total) - y0 - std::lgamma(static_cast<double>(sample.j));
}

inline double posterior_stable_laplace(const SampleSummary& sample, double sigma, double lambda) {
  return std::exp(log_posterior_stable_laplace(sample, sigma, lambda));
}

}  // namespace species
