#pragma once

// Limit laws of K_m / m^σ and exact simulation of the number of new species
// in an additional sample.
//
// NGG: Z = S_{n,j} exponentially tilted, S_{n,j} = B_{j, n/σ - j} · Y_{n/σ},
// drawn by accepting S with probability exp(-(β/S)^{1/σ}). The acceptance
// rate is the normalizer (1/Γ(j)) I(n, j).
// PD:  Z' = B_{j + θ/σ, n/σ - j} · Y_{(θ+n)/σ}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "species/alternating_sum.hpp"
#include "species/bigreal.hpp"
#include "species/laplace.hpp"
#include "species/models.hpp"
#include "species/params.hpp"
#include "species/random.hpp"
#include "species/tilted_stable.hpp"

namespace species {

/// Parameters of the limit law together with its normalizing constant.
struct LimitLaw {
  ModelParams params;
  SampleSummary sample;
  BigReal norm_const{BigReal(1.0, kDefaultPrecisionBits)};
};

/// (1/Γ(j)) Σ_l (-1)^l C(n-1, l) β^{l/σ} Γ(j - l/σ; β); 1 for β = 0 and PD.
inline LimitLaw make_limit_law(const ModelParams& params, const SampleSummary& sample,
                               long precision_bits = kDefaultPrecisionBits) {
  params.validate();
  sample.validate();
  LimitLaw law{params, sample, BigReal(1.0, precision_bits)};
  if (params.family == Family::PD || params.beta == 0.0) return law;
  if (sample.n <= kAlternatingMaxSize) {
    auto compute = [&](long bits) {
      IncompleteGammaSums sums(params.sigma, params.beta, sample.n, sample.j, sample.j, bits);
      return sums.sum(sample.n, sample.j) / tgamma(BigReal::from_long(sample.j, bits));
    };
    law.norm_const = adaptive_precision(precision_bits, compute,
                                        [](const BigReal& a, const BigReal& b) { return relative_difference(a, b); });
  } else {
    law.norm_const = BigReal(posterior_stable_laplace(sample, params.sigma, params.tau()), precision_bits);
  }
  return law;
}

/// Sampler for Z_{n,j} (NGG) or Z'_{n,j} (PD).
class LimitSampler {
 public:
  explicit LimitSampler(const LimitLaw& law) : law_(law) {
    const auto& p = law.params;
    const double n = static_cast<double>(law.sample.n), j = static_cast<double>(law.sample.j);
    if (p.family == Family::NGG) {
      a_ = j;
      b_ = n / p.sigma - j;
      ml_.emplace(n / p.sigma, p.sigma);
      tau_ = p.tau();
    } else {
      a_ = j + p.theta / p.sigma;
      b_ = n / p.sigma - j;
      ml_.emplace((p.theta + n) / p.sigma, p.sigma);
      tau_ = 0.0;
    }
  }

  const LimitLaw& law() const { return law_; }
  const SamplerStats& stats() const { return stats_; }

  /// One draw of S = B · Y before tilting.
  double sample_untilted(RandomState& rng) {
    const double b = rng.beta(a_, b_);
    return b * (*ml_)(rng);
  }

  double operator()(RandomState& rng) {
    while (true) {
      const double s = sample_untilted(rng);
      ++stats_.proposals;
      if (tau_ == 0.0 || rng.uniform() <= std::exp(-tau_ * std::pow(s, -1.0 / law_.params.sigma))) {
        ++stats_.accepted;
        return s;
      }
    }
  }

 private:
  LimitLaw law_;
  double a_ = 1.0, b_ = 1.0, tau_ = 0.0;
  std::optional<MittagLefflerSampler> ml_;
  SamplerStats stats_;
};

/// One draw of Z_{n,j}: S = B · Y_{n/σ}, accepted with probability
/// exp(-(β/S)^{1/σ}).
inline double sample_limit_ngg(const LimitLaw& law, RandomState& rng, SamplerStats* stats = nullptr) {
  if (law.params.family != Family::NGG) throw DomainError("sample_limit_ngg: law must be NGG");
  LimitSampler s(law);
  const double z = s(rng);
  if (stats) {
    stats->proposals += s.stats().proposals;
    stats->accepted += s.stats().accepted;
  }
  return z;
}

inline double sample_limit_pd(const ModelParams& params, const SampleSummary& sample, RandomState& rng) {
  if (params.family != Family::PD) throw DomainError("sample_limit_pd: params must be PD");
  LimitSampler s(make_limit_law(params, sample));
  return s(rng);
}

namespace detail {

// log P(no new species in t steps from (n', k')) for the PD(σ, θ) chain:
// Γ(n' - k'σ + t) Γ(θ + n') / (Γ(n' - k'σ) Γ(θ + n' + t)).
inline double log_no_new(double a, double c, double t) {
  return std::lgamma(a + t) - std::lgamma(a) + std::lgamma(c) - std::lgamma(c + t);
}

// Runs the PD(σ, θ) chain for m steps from (n, j) by drawing the waiting
// time to each new species; returns the number of new species.
inline long stable_chain_skip(double sigma, double theta, long n, long j, long m, RandomState& rng) {
  long steps = 0, k = j;
  while (steps < m) {
    const double n1 = static_cast<double>(n + steps);
    const double a = n1 - static_cast<double>(k) * sigma;
    const double c = theta + n1;
    const long remaining = m - steps;
    const double log_u = std::log(rng.uniform());
    if (log_no_new(a, c, static_cast<double>(remaining)) >= log_u) break;
    // Smallest t in [1, remaining] with log P(no new in t steps) < log u.
    long lo = 1, hi = remaining;
    while (lo < hi) {
      const long mid = lo + (hi - lo) / 2;
      if (log_no_new(a, c, static_cast<double>(mid)) < log_u) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    steps += lo;
    ++k;
  }
  return k - j;
}

}  // namespace detail

/// Exact simulator of the number of new species among m further draws.
///
/// PD and β = 0 run the chain by waiting times. NGG with n + m <= 200 walks
/// the chain with transition probabilities from a V table. Larger NGG runs
/// the σ-stable chain, draws the posterior total mass T of the stable model
/// given (n + m, j + k), and accepts k with probability exp(-β^{1/σ} T).
class AdditionalSampleSimulator {
 public:
  static constexpr long kTableMaxSize = 200;

  AdditionalSampleSimulator(const ModelParams& params, const SampleSummary& sample, long m,
                            long precision_bits = kDefaultPrecisionBits)
      : params_(params), sample_(sample), m_(m) {
    params.validate();
    sample.validate();
    if (m < 0) throw DomainError("simulate_additional_sample: m must be >= 0");
    if (m == 0 || params.family == Family::PD || params.beta == 0.0) return;
    if (sample.n + m <= kTableMaxSize) {
      table_ = std::make_shared<const VTable>(params, sample, m, precision_bits);
    } else {
      mass_ml_ = std::make_shared<const MittagLefflerSampler>(static_cast<double>(sample.n + m) / params.sigma,
                                                              params.sigma);
    }
  }

  const SamplerStats& stats() const { return stats_; }

  long operator()(RandomState& rng) {
    if (m_ == 0) return 0;
    const long n = sample_.n, j = sample_.j;
    if (params_.family == Family::PD || params_.beta == 0.0) {
      const double theta = params_.family == Family::PD ? params_.theta : 0.0;
      return detail::stable_chain_skip(params_.sigma, theta, n, j, m_, rng);
    }
    if (table_) {
      long k = j;
      for (long t = 0; t < m_; ++t) {
        if (rng.uniform() < table_->p_new(n + t, k)) ++k;
      }
      return k - j;
    }
    MittagLefflerSampler ml = *mass_ml_;
    const double sigma = params_.sigma;
    const double big_n = static_cast<double>(n + m_);
    const double tau = params_.tau();
    while (true) {
      const long k = detail::stable_chain_skip(sigma, 0.0, n, j, m_, rng);
      const double big_k = static_cast<double>(j + k);
      const double s = rng.beta(big_k, big_n / sigma - big_k) * ml(rng);
      const double total_mass = std::pow(s, -1.0 / sigma);
      ++stats_.proposals;
      if (rng.uniform() <= std::exp(-tau * total_mass)) {
        ++stats_.accepted;
        return k;
      }
    }
  }

 private:
  ModelParams params_;
  SampleSummary sample_;
  long m_;
  std::shared_ptr<const VTable> table_;
  std::shared_ptr<const MittagLefflerSampler> mass_ml_;
  SamplerStats stats_;
};

inline long simulate_additional_sample(const ModelParams& params, const SampleSummary& sample, long m,
                                       RandomState& rng) {
  AdditionalSampleSimulator sim(params, sample, m);
  return sim(rng);
}

/// Runs body(i, rng.split(i), out[i]) for i < count over worker threads.
/// Results depend only on the index, never on scheduling.
template <class T, class Body>
std::vector<T> run_replications(const RandomState& rng, std::size_t count, Body&& body) {
  std::vector<T> out(count);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, count / 1024));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomState child = rng.split(i);
      out[i] = body(i, child);
    }
  };
  if (workers <= 1) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    if (begin < end) threads.emplace_back(work, begin, end);
  }
  for (auto& t : threads) t.join();
  return out;
}

/// Replicated draws of K (number of new species), replication i using rng.split(i).
inline std::vector<long> simulate_replications(const ModelParams& params, const SampleSummary& sample, long m,
                                               std::size_t count, const RandomState& rng) {
  const AdditionalSampleSimulator proto(params, sample, m);
  return run_replications<long>(rng, count, [&](std::size_t, RandomState& r) {
    AdditionalSampleSimulator sim = proto;
    return sim(r);
  });
}

/// Replicated draws of the limit variable, replication i using rng.split(i).
inline std::vector<double> sample_limit_replications(const LimitLaw& law, std::size_t count, const RandomState& rng) {
  const LimitSampler proto(law);
  return run_replications<double>(rng, count, [&](std::size_t, RandomState& r) {
    LimitSampler s = proto;
    return s(r);
  });
}

}  // namespace species
