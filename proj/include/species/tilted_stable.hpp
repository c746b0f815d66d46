#pragma once

// Exact samplers for the positive σ-stable law and its exponential and
// polynomial tiltings, all built on the Zolotarev/Kanter representation
// T = (A(U)/E)^{(1-σ)/σ}.
//
// Polynomial tilting by t^{-p} reweights (U, E) by A(U)^{-p b} E^{p b} with
// b = (1-σ)/σ, which factorizes: E becomes Gamma(1 + p b) and U gets the
// density ∝ A(u)^{-p b} on (0, π). For p > 0 that density is log-concave and
// is drawn by rejection from a fixed piecewise-exponential tangent hull; for
// -σ < p < 0 it has an integrable power singularity at π and is drawn from a
// matching power envelope.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "species/errors.hpp"
#include "species/random.hpp"
#include "species/stable.hpp"

namespace species {

/// Counts of proposals and acceptances for rejection samplers.
struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// Draw T with E[exp(-λT)] = exp(-λ^σ).
inline double sample_positive_stable(double sigma, RandomState& rng) {
  detail::check_sigma(sigma, "sample_positive_stable");
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  return std::exp((1.0 - sigma) / sigma * (zolotarev_log_a(u, sigma) - std::log(e)));
}

namespace detail {

// Density ∝ exp(-tilt t) f_σ(t) by plain rejection from f_σ.
inline double exp_tilted_plain(double sigma, double tilt, RandomState& rng, SamplerStats* stats) {
  while (true) {
    const double t = sample_positive_stable(sigma, rng);
    const bool ok = rng.uniform() <= std::exp(-tilt * t);
    if (stats) {
      ++stats->proposals;
      if (ok) ++stats->accepted;
    }
    if (ok) return t;
  }
}

}  // namespace detail

/// Draw from the density ∝ exp(-β^{1/σ} t) f_σ(t).
///
/// For β <= 5 this is plain rejection from f_σ (acceptance e^{-β}). For larger
/// β the stable variable is split into N = ⌈β⌉ independent pieces of scale
/// N^{-1/σ}; the tilt factorizes over the pieces, and each piece is accepted
/// with probability e^{-β/N} >= e^{-1}.
inline double sample_exp_tilted_stable(double sigma, double beta, RandomState& rng, SamplerStats* stats = nullptr) {
  detail::check_sigma(sigma, "sample_exp_tilted_stable");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("sample_exp_tilted_stable: beta must be >= 0");
  if (beta == 0.0) return sample_positive_stable(sigma, rng);
  const double tilt = std::pow(beta, 1.0 / sigma);
  if (beta <= 5.0) return detail::exp_tilted_plain(sigma, tilt, rng, stats);
  const double pieces = std::ceil(beta);
  const double scale = std::pow(pieces, -1.0 / sigma);
  double total = 0.0;
  for (long i = 0; i < static_cast<long>(pieces); ++i) {
    total += scale * detail::exp_tilted_plain(sigma, tilt * scale, rng, stats);
  }
  return total;
}

/// Sampler for the density ∝ t^{-p} f_σ(t), p > -σ.
class PolyTiltedStableSampler {
 public:
  PolyTiltedStableSampler(double sigma, double p) : sigma_(sigma), p_(p) {
    detail::check_sigma(sigma, "PolyTiltedStableSampler");
    if (!(p > -sigma) || !std::isfinite(p)) throw DomainError("PolyTiltedStableSampler: need p > -sigma");
    b_ = (1.0 - sigma) / sigma;
    c_ = p * b_;
    log_a0_ = zolotarev_log_a(0.0, sigma);
    if (p > 0.0) build_hull();
    if (p < 0.0) build_power_envelope();
  }

  double sigma() const { return sigma_; }
  double p() const { return p_; }
  const SamplerStats& stats() const { return stats_; }

  /// Draw T.
  double operator()(RandomState& rng) { return std::exp(b_ * log_ratio(rng)); }

  /// Draw log(A(U)/G) with G ~ Gamma(1 + p b); T = exp(b · that).
  double log_ratio(RandomState& rng) {
    const double log_a = sample_log_a(rng);
    const double g = rng.gamma(1.0 + c_);
    return log_a - std::log(g);
  }

  /// Draw log A(U) where U has density ∝ A(u)^{-p b} on (0, π).
  double sample_log_a(RandomState& rng) {
    if (p_ == 0.0) return zolotarev_log_a(std::numbers::pi * rng.uniform(), sigma_);
    if (p_ > 0.0) return zolotarev_log_a(sample_u_hull(rng), sigma_);
    const double w = sample_w_power(rng);
    return log_hp(w) - std::log(w) / (1.0 - sigma_);
  }

 private:
  struct Piece {
    double lo, hi;    // support of this envelope piece
    double u0, h0, g;  // tangent line h0 + g (u - u0)
    double log_mass;
  };

  // log density of U up to a constant; 0 at u = 0, concave and decreasing.
  double h(double u) const { return -c_ * (zolotarev_log_a(u, sigma_) - log_a0_); }
  double dh(double u) const { return -c_ * zolotarev_dlog_a(u, sigma_); }

  void build_hull() {
    constexpr double kLevels[] = {0.0, 0.08, 0.3, 0.7, 1.3, 2.1, 3.2, 4.6, 6.5, 9.0, 12.5, 17.0, 23.0, 31.0, 42.0, 60.0};
    const double u_max = std::numbers::pi * (1.0 - 1e-12);
    std::vector<double> points;
    for (double level : kLevels) {
      if (level == 0.0) {
        points.push_back(0.0);
        continue;
      }
      if (h(u_max) > -level) break;
      double lo = points.back(), hi = u_max;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > -level ? lo : hi) = mid;
      }
      if (hi > points.back()) points.push_back(hi);
    }
    std::vector<double> hv, gv;
    for (double u : points) {
      hv.push_back(h(u));
      gv.push_back(dh(u));
    }
    for (std::size_t i = 1; i < gv.size(); ++i) {
      if (!(gv[i] < gv[i - 1])) throw ConvergenceError("PolyTiltedStableSampler: tangent slopes not decreasing");
    }
    double lo = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double hi = std::numbers::pi;
      if (i + 1 < points.size()) {
        hi = (hv[i + 1] - hv[i] - gv[i + 1] * points[i + 1] + gv[i] * points[i]) / (gv[i] - gv[i + 1]);
        hi = std::clamp(hi, lo, std::numbers::pi);
      }
      Piece pc{lo, hi, points[i], hv[i], gv[i], 0.0};
      const double start = pc.h0 + pc.g * (lo - pc.u0);
      const double len = hi - lo;
      if (std::fabs(pc.g * len) < 1e-12) {
        pc.log_mass = start + std::log(len);
      } else {
        // ∫_lo^hi exp(start + g (u - lo)) du = exp(start) expm1(g len) / g
        pc.log_mass = start + std::log(std::expm1(pc.g * len) / pc.g);
      }
      pieces_.push_back(pc);
      lo = hi;
    }
    double mx = -INFINITY;
    for (const auto& pc : pieces_) mx = std::max(mx, pc.log_mass);
    double acc = 0.0;
    for (const auto& pc : pieces_) {
      acc += std::exp(pc.log_mass - mx);
      cumulative_.push_back(acc);
    }
    for (double& v : cumulative_) v /= acc;
  }

  double sample_u_hull(RandomState& rng) {
    while (true) {
      const double v = rng.uniform();
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(cumulative_.begin(), cumulative_.end(), v) - cumulative_.begin());
      const Piece& pc = pieces_[std::min(idx, pieces_.size() - 1)];
      const double len = pc.hi - pc.lo;
      const double w = rng.uniform();
      double u;
      if (std::fabs(pc.g * len) < 1e-12) {
        u = pc.lo + w * len;
      } else {
        u = pc.lo + std::log1p(w * std::expm1(pc.g * len)) / pc.g;
      }
      u = std::clamp(u, pc.lo, pc.hi);
      if (u >= std::numbers::pi) continue;
      const double envelope = pc.h0 + pc.g * (u - pc.u0);
      const bool ok = std::log(rng.uniform()) <= h(u) - envelope;
      ++stats_.proposals;
      if (ok) {
        ++stats_.accepted;
        return u;
      }
    }
  }

  // log of A(u) (π - u)^{1/(1-σ)} as a function of w = π - u, bounded on
  // (0, π]. sin(u) is taken as sin(w) so that tiny w keeps full accuracy.
  double log_hp(double w) const {
    const double u = std::numbers::pi - w;
    const double s1 = 1.0 - sigma_;
    return (sigma_ * std::log(std::sin(sigma_ * u)) + s1 * std::log(std::sin(s1 * u)) - log_sinc_w(w)) / s1;
  }
  static double log_sinc_w(double w) { return w < 1e-4 ? -w * w / 6.0 : std::log(std::sin(w) / w); }

  void build_power_envelope() {
    double mx = -INFINITY;
    constexpr int kGrid = 4096;
    for (int i = 0; i < kGrid; ++i) {
      const double w = std::numbers::pi * (static_cast<double>(i) + 0.5) / kGrid;
      mx = std::max(mx, log_hp(w));
    }
    // Limit at u → π: sin(σπ)^σ sin((1-σ)π)^{1-σ} with sin u ≈ π - u.
    const double at_pi = (sigma_ * std::log(std::sin(sigma_ * std::numbers::pi)) +
                          (1.0 - sigma_) * std::log(std::sin((1.0 - sigma_) * std::numbers::pi))) /
                         (1.0 - sigma_);
    log_hp_max_ = std::max(mx, at_pi) + 0.01;
    power_ = -p_ / sigma_;  // envelope ∝ (π - u)^{-power_}, 0 < power_ < 1
  }

  // w = π - U, proposed from the density ∝ w^{-power_} on (0, π).
  double sample_w_power(RandomState& rng) {
    const double c_abs = -c_;
    while (true) {
      const double w = std::numbers::pi * std::exp(std::log(rng.uniform()) / (1.0 - power_));
      if (!(w > 0.0) || !(w < std::numbers::pi)) continue;
      const bool ok = std::log(rng.uniform()) <= c_abs * (log_hp(w) - log_hp_max_);
      ++stats_.proposals;
      if (ok) {
        ++stats_.accepted;
        return w;
      }
    }
  }

  double sigma_;
  double p_;
  double b_ = 0.0;
  double c_ = 0.0;
  double log_a0_ = 0.0;
  std::vector<Piece> pieces_;
  std::vector<double> cumulative_;
  double log_hp_max_ = 0.0;
  double power_ = 0.0;
  SamplerStats stats_;
};

/// Sampler for Y_q, density Γ(qσ+1)/(σΓ(q+1)) y^{q-1-1/σ} f_σ(y^{-1/σ}).
/// Y_q^{-1/σ} is the stable law tilted by t^{-qσ}.
class MittagLefflerSampler {
 public:
  MittagLefflerSampler(double q, double sigma) : q_(q), tilted_(sigma, q * sigma) {
    if (!(q > 0.0)) throw DomainError("MittagLefflerSampler: q must be > 0");
  }
  double q() const { return q_; }
  double sigma() const { return tilted_.sigma(); }
  /// Y = (G / A(U))^{1-σ}.
  double operator()(RandomState& rng) { return std::exp(-(1.0 - tilted_.sigma()) * tilted_.log_ratio(rng)); }

 private:
  double q_;
  PolyTiltedStableSampler tilted_;
};

inline double sample_mittag_leffler(double q, double sigma, RandomState& rng) {
  MittagLefflerSampler s(q, sigma);
  return s(rng);
}

}  // namespace species
