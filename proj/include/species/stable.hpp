#pragma once

// Positive σ-stable law with Laplace transform exp(-λ^σ), through the
// Zolotarev/Kanter function
//
//   A(u) = [ sin(σu)^σ sin((1-σ)u)^{1-σ} / sin(u) ]^{1/(1-σ)},  0 < u < π,
//
// for which T = (A(U)/E)^{(1-σ)/σ} with U ~ Unif(0, π), E ~ Exp(1), and
//
//   f_σ(x) = σ / ((1-σ)π) x^{-1/(1-σ)} ∫_0^π A(u) exp(-A(u) x^{-σ/(1-σ)}) du.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "species/errors.hpp"

namespace species {

namespace detail {

inline void check_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError(std::string(who) + ": sigma must lie in (0, 1)");
}

// log(sin x / x) for 0 <= x < π.
inline double log_sinc(double x) {
  if (x < 1e-4) return -x * x / 6.0;
  return std::log(std::sin(x) / x);
}

// d/dx log(sin x / x) = cot x - 1/x.
inline double dlog_sinc(double x) {
  if (x < 0.1) {
    const double x2 = x * x;
    return -x * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 / 4725.0)));
  }
  return std::cos(x) / std::sin(x) - 1.0 / x;
}

}  // namespace detail

/// log A(u) for the Zolotarev function, 0 <= u < π.
inline double zolotarev_log_a(double u, double sigma) {
  const double s1 = 1.0 - sigma;
  const double c = sigma * std::log(sigma) + s1 * std::log(s1);
  return (c + sigma * detail::log_sinc(sigma * u) + s1 * detail::log_sinc(s1 * u) - detail::log_sinc(u)) / s1;
}

inline double zolotarev_a(double u, double sigma) { return std::exp(zolotarev_log_a(u, sigma)); }

/// d/du log A(u); positive and increasing on (0, π).
inline double zolotarev_dlog_a(double u, double sigma) {
  const double s1 = 1.0 - sigma;
  return (sigma * sigma * detail::dlog_sinc(sigma * u) + s1 * s1 * detail::dlog_sinc(s1 * u) -
          detail::dlog_sinc(u)) /
         s1;
}

/// f_σ(x) by Gauss–Kronrod quadrature of the Zolotarev integral.
inline double stable_density_zolotarev(double x, double sigma) {
  detail::check_sigma(sigma, "stable_density");
  if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
  const double s1 = 1.0 - sigma;
  const double log_s = -sigma / s1 * std::log(x);
  const double log_a0 = zolotarev_log_a(0.0, sigma);
  // Integrand A s exp(-(A - A0) s); the factor exp(-A0 s) is applied at the end.
  const double a0s = std::exp(log_a0 + log_s);
  const double log_pre = std::log(sigma / (s1 * std::numbers::pi)) - std::log(x) - a0s;
  // The integrand never exceeds max(1, A0 s).
  if (log_pre + std::log(std::numbers::pi * std::max(1.0, a0s)) < -750.0) return 0.0;
  auto integrand = [&](double u) {
    if (u >= std::numbers::pi) return 0.0;
    const double la = zolotarev_log_a(u, sigma);
    const double as = std::exp(la + log_s);
    const double excess = std::expm1(la - log_a0) * a0s;
    return as * std::exp(-excess);
  };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numbers::pi, 15, 1e-12, &err);
  const double log_f = log_pre + std::log(integral);
  return integral > 0.0 ? std::exp(log_f) : 0.0;
}

/// Density f_σ of the positive σ-stable law; closed form at σ = 1/2.
inline double stable_density(double x, double sigma) {
  detail::check_sigma(sigma, "stable_density");
  if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
  if (sigma == 0.5) return std::exp(-1.5 * std::log(x) - 0.25 / x) / (2.0 * std::sqrt(std::numbers::pi));
  return stable_density_zolotarev(x, sigma);
}

/// P(T <= x) = (1/π) ∫_0^π exp(-A(u) x^{-σ/(1-σ)}) du.
inline double stable_cdf(double x, double sigma) {
  detail::check_sigma(sigma, "stable_cdf");
  if (!(x > 0.0)) return 0.0;
  if (!std::isfinite(x)) return 1.0;
  if (sigma == 0.5) return std::erfc(0.5 / std::sqrt(x));
  const double log_s = -sigma / (1.0 - sigma) * std::log(x);
  auto integrand = [&](double u) {
    if (u >= std::numbers::pi) return 0.0;
    return std::exp(-std::exp(zolotarev_log_a(u, sigma) + log_s));
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numbers::pi, 30, 1e-12, &err);
  return std::min(1.0, v / std::numbers::pi);
}

}  // namespace species
