#pragma once

// Self-check suite behind `species validate`: a handful of fast identities
// that must hold for any correct build.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "species/species.hpp"

namespace species::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // observed discrepancy
  double tolerance = 0.0;  // passes when value < tolerance
};

namespace detail {

inline CheckResult make_check(std::string name, double value, double tolerance) {
  return {std::move(name), value < tolerance, value, tolerance};
}

inline double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  const std::size_t size = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < size; ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return a.size() == b.size() ? d : 1.0;
}

}  // namespace detail

inline std::vector<CheckResult> run_validation_suite(std::uint64_t seed, long precision_bits) {
  std::vector<CheckResult> out;
  const ModelParams ngg = ModelParams::ngg(0.5, 1.0);
  const ModelParams pd = ModelParams::pd(0.5, 0.7);

  double norm_err = 0.0;
  for (const auto& p : {ngg, ModelParams::ngg(0.25, 5.0), pd}) {
    for (long m : {1L, 10L, 50L}) {
      norm_err = std::max(norm_err, std::fabs(exact_pmf(p, {5, 3}, m, precision_bits).total() - 1.0));
    }
  }
  out.push_back(detail::make_check("pmf_normalization", norm_err, 1e-9));

  out.push_back(detail::make_check(
      "exact_vs_dp_oracle",
      detail::max_abs_difference(exact_pmf(ngg, {5, 3}, 30, precision_bits).probs,
                                 dp_oracle_pmf(ngg, {5, 3}, 30, precision_bits).probs),
      1e-10));

  double residual = 0.0;
  for (const auto& p : {ngg, pd}) {
    for (long n = 1; n <= 12; ++n) {
      for (long k = 1; k <= n; ++k) {
        const BigReal v = gibbs_vnk(p, n, k, precision_bits);
        const BigReal rhs = gibbs_vnk(p, n + 1, k + 1, precision_bits) +
                            gibbs_vnk(p, n + 1, k, precision_bits) *
                                (static_cast<double>(n) - static_cast<double>(k) * p.sigma);
        residual = std::max(residual, relative_difference(v, rhs));
      }
    }
  }
  out.push_back(detail::make_check("gibbs_recursion", residual, 1e-10));

  out.push_back(detail::make_check(
      "stable_boundary",
      detail::max_abs_difference(exact_pmf(ModelParams::ngg(0.5, 1e-8), {5, 3}, 20, precision_bits).probs,
                                 exact_pmf(ModelParams::pd(0.5, 0.0), {5, 3}, 20, precision_bits).probs),
      1e-5));

  double sup = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double z = 0.125 * i;
    sup = std::max(sup, std::fabs(limit_density_half(z, ngg, {5, 3}, precision_bits) -
                                  limit_density_quadrature(z, ngg, {5, 3})));
  }
  out.push_back(detail::make_check("half_density_closed_form", sup, 1e-6));

  // Acceptance rate of the limit sampler against its normalizing constant,
  // measured in standard errors.
  const LimitLaw law = make_limit_law(ngg, {1, 1}, precision_bits);
  LimitSampler sampler(law);
  RandomState rng(seed);
  for (int i = 0; i < 20000; ++i) sampler(rng);
  const double c = law.norm_const.to_double();
  const double se = std::sqrt(c * (1.0 - c) / static_cast<double>(sampler.stats().proposals));
  out.push_back(detail::make_check("limit_acceptance_rate_se", std::fabs(sampler.stats().acceptance_rate() - c) / se, 3.0));
  return out;
}

}  // namespace species::cli
