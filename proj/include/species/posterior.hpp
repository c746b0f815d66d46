#pragma once

// Exact distribution of the number K of new species in m further draws,
// given n observations showing j species. For NGG(σ, β),
//
//   P(K = k) = 𝒢(m, k; σ, n - jσ) / (n)_m · I(n+m, j+k) / I(n, j),
//
// with I the alternating incomplete-gamma sum of the Gibbs weights. For large
// n + m the same quantity is evaluated through the integral form of I, as the
// σ-stable (β = 0) probabilities times a ratio of posterior Laplace
// transforms. PD(σ, θ) uses the forward recursion over (n', k').

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "species/alternating_sum.hpp"
#include "species/bigreal.hpp"
#include "species/factorial.hpp"
#include "species/laplace.hpp"
#include "species/models.hpp"
#include "species/params.hpp"

namespace species {

inline constexpr long kExactMaxM = 10000;

struct PosteriorPMF {
  long m = 0;
  std::vector<double> probs;  // k = 0..m
  ModelParams params;
  SampleSummary sample;

  double operator[](long k) const { return probs.at(static_cast<std::size_t>(k)); }
  double total() const {
    long double s = 0.0L;
    for (double p : probs) s += p;
    return static_cast<double>(s);
  }
};

struct HpdInterval {
  long lo = 0;
  long hi = 0;
  double mass = 0.0;
  double alpha = 0.0;  // requested mass
};

namespace detail {

inline void check_pmf_inputs(const ModelParams& params, const SampleSummary& sample, long m) {
  params.validate();
  sample.validate();
  if (m < 0) throw DomainError("exact_pmf: m must be >= 0");
}

// Forward recursion over (n', k') with P(new | n', k') = p_new(n', k').
template <class PNew>
std::vector<double> chain_pmf(long n, long j, long m, PNew&& p_new) {
  std::vector<double> cur{1.0}, next;
  for (long t = 0; t < m; ++t) {
    next.assign(cur.size() + 1, 0.0);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double p = p_new(n + t, j + static_cast<long>(k));
      next[k] += cur[k] * (1.0 - p);
      next[k + 1] += cur[k] * p;
    }
    cur.swap(next);
  }
  return cur;
}

inline std::vector<double> stable_chain_pmf(double sigma, double theta, long n, long j, long m) {
  return chain_pmf(n, j, m, [&](long n1, long k1) {
    return (theta + static_cast<double>(k1) * sigma) / (theta + static_cast<double>(n1));
  });
}

inline std::vector<double> ngg_alternating_pmf(const ModelParams& params, const SampleSummary& sample, long m,
                                               long precision_bits) {
  const long n = sample.n, j = sample.j;
  auto compute = [&](long bits) {
    const long w = bits + 32;
    BigReal sigma(params.sigma, w);
    BigReal r = BigReal::from_long(n, w) - sigma * static_cast<double>(j);
    std::vector<BigReal> coeff = gfc_row(m, sigma, r);
    BigReal rising = rising_factorial(BigReal::from_long(n, w), m);
    IncompleteGammaSums sums(params.sigma, params.beta, n + m, j, j + m, bits);
    std::vector<BigReal> num = sums.sums(n + m, j, j + m);
    BigReal den = sums.sum(n, j) * rising;
    std::vector<BigReal> out;
    out.reserve(static_cast<std::size_t>(m + 1));
    for (long k = 0; k <= m; ++k) out.push_back(coeff[static_cast<std::size_t>(k)] * num[static_cast<std::size_t>(k)] / den);
    return out;
  };
  const auto big = adaptive_precision(precision_bits, compute,
                                      [](const auto& a, const auto& b) { return max_relative_difference(a, b); });
  std::vector<double> probs;
  probs.reserve(big.size());
  for (const auto& v : big) probs.push_back(v.to_double());
  return probs;
}

inline std::vector<double> ngg_integral_pmf(const ModelParams& params, const SampleSummary& sample, long m) {
  const long n = sample.n, j = sample.j;
  const double tau = params.tau();
  std::vector<double> probs = stable_chain_pmf(params.sigma, 0.0, n, j, m);
  const double log_den = log_posterior_stable_laplace(sample, params.sigma, tau);
  for (long k = 0; k <= m; ++k) {
    double& p = probs[static_cast<std::size_t>(k)];
    if (p <= 0.0) continue;
    const double log_num = log_posterior_stable_laplace({n + m, j + k}, params.sigma, tau);
    p = std::exp(std::log(p) + log_num - log_den);
  }
  return probs;
}

}  // namespace detail

/// P(K = k | n, j) for k = 0..m. Refuses m above 10000.
inline PosteriorPMF exact_pmf(const ModelParams& params, const SampleSummary& sample, long m,
                              long precision_bits = kDefaultPrecisionBits) {
  detail::check_pmf_inputs(params, sample, m);
  if (m > kExactMaxM) {
    throw DomainError("exact_pmf: m = " + std::to_string(m) +
                      " exceeds 10000; use approximate_posterior for large additional samples");
  }
  PosteriorPMF pmf{m, {}, params, sample};
  if (m == 0) {
    pmf.probs = {1.0};
  } else if (params.family == Family::PD || params.beta == 0.0) {
    const double theta = params.family == Family::PD ? params.theta : 0.0;
    pmf.probs = detail::stable_chain_pmf(params.sigma, theta, sample.n, sample.j, m);
  } else if (sample.n + m <= kAlternatingMaxSize) {
    pmf.probs = detail::ngg_alternating_pmf(params, sample, m, precision_bits);
  } else {
    pmf.probs = detail::ngg_integral_pmf(params, sample, m);
  }
  return pmf;
}

/// The same distribution by forward recursion over the Markov chain (n', k')
/// with transition probabilities V_{n'+1,k'+1} / V_{n',k'}.
inline PosteriorPMF dp_oracle_pmf(const ModelParams& params, const SampleSummary& sample, long m,
                                  long precision_bits = kDefaultPrecisionBits) {
  detail::check_pmf_inputs(params, sample, m);
  PosteriorPMF pmf{m, {}, params, sample};
  if (m == 0) {
    pmf.probs = {1.0};
    return pmf;
  }
  const VTable table(params, sample, m, precision_bits);
  pmf.probs = detail::chain_pmf(sample.n, sample.j, m, [&](long n1, long k1) { return table.p_new(n1, k1); });
  return pmf;
}

/// Bayes estimate under quadratic loss: Σ k P(K = k).
inline double posterior_mean(const PosteriorPMF& pmf) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < pmf.probs.size(); ++k) s += static_cast<long double>(k) * pmf.probs[k];
  return static_cast<double>(s);
}

/// Shortest contiguous [lo, hi] with mass >= alpha; ties go to the smaller lo.
inline HpdInterval hpd_interval(const PosteriorPMF& pmf, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("hpd_interval: alpha must lie in (0, 1]");
  if (pmf.probs.empty()) throw DomainError("hpd_interval: empty pmf");
  constexpr double kSlack = 1e-12;
  const std::size_t size = pmf.probs.size();
  std::vector<long double> prefix(size + 1, 0.0L);
  for (std::size_t i = 0; i < size; ++i) prefix[i + 1] = prefix[i] + pmf.probs[i];
  const long double target = static_cast<long double>(alpha) - kSlack;
  HpdInterval best{0, static_cast<long>(size) - 1, static_cast<double>(prefix[size]), alpha};
  std::size_t hi = 0;
  bool found = false;
  for (std::size_t lo = 0; lo < size; ++lo) {
    if (hi < lo) hi = lo;
    while (hi < size && prefix[hi + 1] - prefix[lo] < target) ++hi;
    if (hi == size) break;
    if (!found || hi - lo < static_cast<std::size_t>(best.hi - best.lo)) {
      best = {static_cast<long>(lo), static_cast<long>(hi), static_cast<double>(prefix[hi + 1] - prefix[lo]), alpha};
      found = true;
    }
  }
  best.mass = std::min(best.mass, 1.0);
  return best;
}

}  // namespace species
