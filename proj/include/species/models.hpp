#pragma once

// Predictive weights and Gibbs weights V_{n,k} of the NGG(σ, β) and
// PD(σ, θ) species sampling models.
//
// For NGG with τ = β^{1/σ},
//   V_{n,k} = e^β σ^{k-1} / Γ(n) · I(n, k),
//   I(n, k) = Σ_{l=0}^{n-1} C(n-1, l) (-1)^l τ^l Γ(k - l/σ; β),
// and for PD
//   V_{n,k} = Π_{i=1}^{k-1} (θ + iσ) / (θ + 1)_{n-1}.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "species/alternating_sum.hpp"
#include "species/bigreal.hpp"
#include "species/factorial.hpp"
#include "species/incomplete_gamma.hpp"
#include "species/params.hpp"
#include "species/random.hpp"
#include "species/tilted_stable.hpp"

namespace species {

struct PredictiveWeights {
  double p_new = 0.0;
  std::vector<double> p_old;  // one entry per observed species, in input order
};

namespace detail {

inline void check_frequencies(long n, long j, std::span<const long> freqs) {
  if (n < 1 || j < 1 || j > n) throw DomainError("predictive_weights: need 1 <= j <= n");
  if (static_cast<long>(freqs.size()) != j) {
    throw ConsistencyError("predictive_weights: expected " + std::to_string(j) + " frequencies, got " +
                           std::to_string(freqs.size()));
  }
  long total = 0;
  for (long f : freqs) {
    if (f < 1) throw ConsistencyError("predictive_weights: frequencies must be >= 1");
    total += f;
  }
  if (total != n) {
    throw ConsistencyError("predictive_weights: frequencies sum to " + std::to_string(total) + ", expected n = " +
                           std::to_string(n));
  }
}

}  // namespace detail

/// Probability that observation n+1 is a new species, and that it repeats
/// each of the j observed species.
inline PredictiveWeights predictive_weights(const ModelParams& params, long n, long j, std::span<const long> freqs,
                                            long precision_bits = kDefaultPrecisionBits) {
  params.validate();
  detail::check_frequencies(n, j, freqs);
  const double sigma = params.sigma;
  PredictiveWeights w;
  if (params.family == Family::PD || params.beta == 0.0) {
    const double theta = params.family == Family::PD ? params.theta : 0.0;
    const double denom = theta + static_cast<double>(n);
    w.p_new = (theta + static_cast<double>(j) * sigma) / denom;
    for (long f : freqs) w.p_old.push_back((static_cast<double>(f) - sigma) / denom);
    return w;
  }
  // p_new = (σ/n) I(n+1, j+1) / I(n, j);  p_old_i = ((n_i - σ)/n) I(n+1, j) / I(n, j).
  auto compute = [&](long bits) {
    IncompleteGammaSums sums(sigma, params.beta, n + 1, j, j + 1, bits);
    std::vector<BigReal> out = sums.sums(n + 1, j, j + 1);
    out.push_back(sums.sum(n, j));
    return out;
  };
  const auto s = adaptive_precision(precision_bits, compute,
                                    [](const auto& a, const auto& b) { return max_relative_difference(a, b); });
  BigReal denom = s[2] * static_cast<double>(n);
  w.p_new = (s[1] * sigma / denom).to_double();
  const double old_ratio = (s[0] / denom).to_double();
  for (long f : freqs) w.p_old.push_back((static_cast<double>(f) - sigma) * old_ratio);
  return w;
}

/// V_{n,k}. The NGG branch evaluates each incomplete gamma on its own and
/// accumulates the signed terms exactly.
inline BigReal gibbs_vnk(const ModelParams& params, long n, long k, long precision_bits = kDefaultPrecisionBits) {
  params.validate();
  if (n < 1) throw IndexError("gibbs_vnk: n must be >= 1");
  if (k < 1 || k > n) throw IndexError("gibbs_vnk: need 1 <= k <= n");
  const long p0 = std::max(precision_bits, kMinPrecisionBits);
  if (params.family == Family::PD || params.beta == 0.0) {
    const long w = p0 + 32;
    const double theta = params.family == Family::PD ? params.theta : 0.0;
    BigReal num = BigReal::from_long(1, w);
    for (long i = 1; i < k; ++i) num *= BigReal(theta, w) + BigReal(params.sigma, w) * static_cast<double>(i);
    BigReal den = rising_factorial(BigReal(theta, w) + 1.0, n - 1);
    BigReal v = num / den;
    mpfr_prec_round(v.raw(), p0, MPFR_RNDN);
    return v;
  }
  auto compute = [&](long bits) {
    const long w = bits + 32;
    BigReal sigma(params.sigma, w), beta(params.beta, w);
    BigReal inv_sigma = BigReal::from_long(1, w) / sigma;
    BigReal tau = pow(beta, inv_sigma);
    std::vector<BigReal> terms;
    BigReal binom = BigReal::from_long(1, w);
    BigReal tau_l = BigReal::from_long(1, w);
    for (long l = 0; l < n; ++l) {
      BigReal a = BigReal::from_long(k, w) - inv_sigma * static_cast<double>(l);
      BigReal t = binom * tau_l * upper_incomplete_gamma(a, beta, w);
      terms.push_back(l % 2 == 0 ? t : -t);
      binom *= static_cast<double>(n - 1 - l);
      binom /= static_cast<double>(l + 1);
      tau_l *= tau;
    }
    BigReal sum = exact_sum(terms, w);
    BigReal pre = exp(beta) * pow(sigma, k - 1) / tgamma(BigReal::from_long(n, w));
    BigReal v = pre * sum;
    mpfr_prec_round(v.raw(), bits, MPFR_RNDN);
    return v;
  };
  return adaptive_precision(p0, compute, [](const BigReal& a, const BigReal& b) { return relative_difference(a, b); });
}

/// Gibbs weights on the states (n', k') reachable from (n, j) in m steps:
/// n <= n' <= n + m, j <= k' <= j + (n' - n).
class VTable {
 public:
  VTable(const ModelParams& params, const SampleSummary& sample, long m,
         long precision_bits = kDefaultPrecisionBits)
      : params_(params), n_(sample.n), j_(sample.j), m_(m) {
    params.validate();
    sample.validate();
    if (m < 0) throw DomainError("VTable: m must be >= 0");
    stable_ = params.family == Family::PD || params.beta == 0.0;
    if (stable_) return;
    auto compute = [&](long bits) { return build_integrals(bits); };
    auto flat_distance = [](const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
      return max_relative_difference(a, b);
    };
    integrals_ = adaptive_precision(std::max(precision_bits, kMinPrecisionBits), compute, flat_distance);
    for (long row = 0; row < m_; ++row) {
      const long n1 = n_ + row;
      for (long k1 = j_; k1 <= j_ + row; ++k1) {
        // σ I(n'+1, k'+1) / (n' I(n', k'))
        BigReal r = integrals_[index(n1 + 1, k1 + 1)] / integrals_[index(n1, k1)];
        p_new_.push_back((r * (params_.sigma / static_cast<double>(n1))).to_double());
      }
    }
  }

  long n() const { return n_; }
  long j() const { return j_; }
  long m() const { return m_; }

  /// P(observation n'+1 is new | n' observations with k' species) =
  /// V_{n'+1,k'+1} / V_{n',k'}.
  double p_new(long n1, long k1) const {
    check(n1, k1);
    if (n1 + 1 > n_ + m_) throw IndexError("VTable::p_new: n' + 1 exceeds the table");
    if (stable_) {
      const double theta = params_.family == Family::PD ? params_.theta : 0.0;
      return (theta + static_cast<double>(k1) * params_.sigma) / (theta + static_cast<double>(n1));
    }
    return p_new_[index(n1, k1)];
  }

  /// I(n', k') for NGG (β > 0).
  const BigReal& integral(long n1, long k1) const {
    check(n1, k1);
    if (stable_) throw DomainError("VTable::integral: only defined for NGG with beta > 0");
    return integrals_[index(n1, k1)];
  }

 private:
  void check(long n1, long k1) const {
    if (n1 < n_ || n1 > n_ + m_) throw IndexError("VTable: n' out of range");
    if (k1 < j_ || k1 > j_ + (n1 - n_)) throw IndexError("VTable: k' out of range");
  }
  std::size_t index(long n1, long k1) const {
    const long row = n1 - n_;
    return static_cast<std::size_t>(row * (row + 1) / 2 + (k1 - j_));
  }

  std::vector<BigReal> build_integrals(long bits) const {
    IncompleteGammaSums sums(params_.sigma, params_.beta, n_ + m_, j_, j_ + m_, bits);
    std::vector<BigReal> out;
    out.reserve(static_cast<std::size_t>((m_ + 1) * (m_ + 2) / 2));
    for (long row = 0; row <= m_; ++row) {
      auto values = sums.sums(n_ + row, j_, j_ + row);
      for (auto& v : values) out.push_back(std::move(v));
    }
    return out;
  }

  ModelParams params_;
  long n_, j_, m_;
  bool stable_ = false;
  std::vector<BigReal> integrals_;
  std::vector<double> p_new_;  // same triangular layout, rows n' < n + m
};

/// Draws of the σ-diversity S = T^{-σ}: T exponentially tilted (NGG) or
/// polynomially tilted by t^{-θ} (PD).
class DiversitySampler {
 public:
  explicit DiversitySampler(const ModelParams& params) : params_(params) {
    params.validate();
    if (params.family == Family::PD && params.theta != 0.0) poly_.emplace(params.sigma, params.theta);
  }
  double operator()(RandomState& rng) {
    double t;
    if (params_.family == Family::NGG) {
      t = sample_exp_tilted_stable(params_.sigma, params_.beta, rng);
    } else if (poly_) {
      t = (*poly_)(rng);
    } else {
      t = sample_positive_stable(params_.sigma, rng);
    }
    return std::pow(t, -params_.sigma);
  }

 private:
  ModelParams params_;
  std::optional<PolyTiltedStableSampler> poly_;
};

inline double diversity_sample(const ModelParams& params, RandomState& rng) {
  DiversitySampler s(params);
  return s(rng);
}

}  // namespace species
