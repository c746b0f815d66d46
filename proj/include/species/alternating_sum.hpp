#pragma once

// Exact accumulation of signed series and the binomially weighted
// incomplete-gamma sums that every finite-sample NGG formula is built from:
//
//   Σ_{l=0}^{N-1} C(N-1, l) (-1)^l β^{l/σ} Γ(K - l/σ; β).
//
// The terms are of size up to 2^N while the sum can be exponentially small,
// so everything is done in BigReal and callers raise the precision until
// two successive precisions agree (see adaptive_precision).

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "species/bigreal.hpp"
#include "species/incomplete_gamma.hpp"

namespace species {

/// Largest number of terms for which the alternating sums are used; larger
/// cases go through the equivalent positive integral.
inline constexpr long kAlternatingMaxSize = 400;

struct SignedLogTerm {
  int sign = 1;  // +1 or -1 (0 drops the term)
  double log_magnitude = 0.0;
};

/// Σ sign_i exp(log_magnitude_i), accumulated exactly and rounded once.
inline BigReal signed_alternating_sum(std::span<const SignedLogTerm> terms,
                                      long precision_bits = kDefaultPrecisionBits) {
  std::vector<BigReal> values;
  values.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    BigReal v = exp(BigReal(t.log_magnitude, precision_bits));
    if (t.sign < 0) mpfr_neg(v.raw(), v.raw(), MPFR_RNDN);
    values.push_back(std::move(v));
  }
  return exact_sum(values, precision_bits);
}

/// Run `compute(bits)` at `start_bits`, 2*start_bits, ... until
/// `distance(prev, next) <= rel_tol`, and return the last result.
template <class Compute, class Distance>
auto adaptive_precision(long start_bits, Compute&& compute, Distance&& distance, double rel_tol = 1e-12,
                        long max_bits = 1L << 18) {
  long bits = std::max(start_bits, kMinPrecisionBits);
  auto prev = compute(bits);
  while (true) {
    bits *= 2;
    if (bits > max_bits) throw ConvergenceError("adaptive_precision: no agreement below the bit cap");
    auto next = compute(bits);
    if (distance(prev, next) <= rel_tol) return next;
    prev = std::move(next);
  }
}

/// Max entrywise relative difference of two equally long BigReal vectors.
inline double max_relative_difference(const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_difference(a[i], b[i]));
  return worst;
}

/// Terms τ^l Γ(K - l/σ; β) (τ = β^{1/σ}) for 0 <= l < l_end and
/// k_min <= K <= k_max, with the binomially weighted sums over l.
class IncompleteGammaSums {
 public:
  IncompleteGammaSums(double sigma, double beta, long l_end, long k_min, long k_max, long precision_bits)
      : prec_(precision_bits), l_end_(l_end), k_min_(k_min), k_max_(k_max) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("IncompleteGammaSums: sigma must lie in (0, 1)");
    if (!(beta > 0.0)) throw DomainError("IncompleteGammaSums: beta must be > 0");
    if (l_end < 1 || k_max < k_min) throw DomainError("IncompleteGammaSums: empty index range");
    const long w = precision_bits + 32;
    BigReal s(sigma, w), b(beta, w);
    BigReal inv_sigma = BigReal::from_long(1, w) / s;
    BigReal tau = pow(b, inv_sigma);

    tau_pow_.reserve(static_cast<std::size_t>(l_end));
    BigReal tp = BigReal::from_long(1, w);
    for (long l = 0; l < l_end; ++l) {
      tau_pow_.push_back(tp);
      tp *= tau;
    }

    const std::size_t width = static_cast<std::size_t>(k_max - k_min + 1);
    ladders_.resize(static_cast<std::size_t>(l_end));
    // Integer shifts l/σ share one ladder over the integers.
    std::vector<long> integer_shift(static_cast<std::size_t>(l_end), -1);
    long max_int_shift = -1;
    for (long l = 0; l < l_end; ++l) {
      BigReal shift = inv_sigma * static_cast<double>(l);
      if (shift.is_integer()) {
        integer_shift[static_cast<std::size_t>(l)] = mpfr_get_si(shift.raw(), MPFR_RNDN);
        max_int_shift = std::max(max_int_shift, integer_shift[static_cast<std::size_t>(l)]);
      }
    }
    std::vector<BigReal> integer_ladder;
    if (max_int_shift >= 0) {
      const auto count = static_cast<std::size_t>(k_max - (k_min - max_int_shift) + 1);
      integer_ladder = upper_incomplete_gamma_ladder(BigReal::from_long(k_max, w), count, b, w);
    }
    for (long l = 0; l < l_end; ++l) {
      auto& ladder = ladders_[static_cast<std::size_t>(l)];
      const long ishift = integer_shift[static_cast<std::size_t>(l)];
      if (ishift >= 0) {
        // integer_ladder[i] = Γ(k_max - i); we need Γ(K - ishift) for K = k_max..k_min.
        ladder.assign(integer_ladder.begin() + ishift, integer_ladder.begin() + ishift + static_cast<long>(width));
      } else {
        BigReal a_top = BigReal::from_long(k_max, w) - inv_sigma * static_cast<double>(l);
        ladder = upper_incomplete_gamma_ladder(a_top, width, b, w);
      }
      for (auto& g : ladder) g *= tau_pow_[static_cast<std::size_t>(l)];
    }
  }

  long precision() const { return prec_; }
  long l_end() const { return l_end_; }
  long k_min() const { return k_min_; }
  long k_max() const { return k_max_; }

  /// τ^l Γ(K - l/σ; β).
  const BigReal& term(long l, long k) const {
    if (l < 0 || l >= l_end_ || k < k_min_ || k > k_max_) throw IndexError("IncompleteGammaSums: index out of range");
    return ladders_[static_cast<std::size_t>(l)][static_cast<std::size_t>(k_max_ - k)];
  }

  /// Σ_{l=0}^{N-1} C(N-1, l) (-1)^l τ^l Γ(K - l/σ; β).
  BigReal sum(long n_terms, long k) const { return sums(n_terms, k, k).front(); }

  /// The same sum for K = k_lo..k_hi, sharing the binomial row.
  std::vector<BigReal> sums(long n_terms, long k_lo, long k_hi) const {
    if (n_terms < 1 || n_terms > l_end_) throw IndexError("IncompleteGammaSums: N out of range");
    const long w = prec_ + 32;
    std::vector<BigReal> binom;
    binom.reserve(static_cast<std::size_t>(n_terms));
    BigReal c = BigReal::from_long(1, w);
    for (long l = 0; l < n_terms; ++l) {
      binom.push_back(l % 2 == 0 ? c : -c);
      // C(N-1, l+1) = C(N-1, l) (N-1-l) / (l+1)
      mpfr_mul_si(c.raw(), c.raw(), n_terms - 1 - l, MPFR_RNDN);
      mpfr_div_si(c.raw(), c.raw(), l + 1, MPFR_RNDN);
    }
    std::vector<BigReal> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    std::vector<BigReal> terms(static_cast<std::size_t>(n_terms), BigReal(w));
    for (long k = k_lo; k <= k_hi; ++k) {
      for (long l = 0; l < n_terms; ++l) {
        mpfr_mul(terms[static_cast<std::size_t>(l)].raw(), binom[static_cast<std::size_t>(l)].raw(),
                 term(l, k).raw(), MPFR_RNDN);
      }
      out.push_back(exact_sum(terms, prec_));
    }
    return out;
  }

 private:
  long prec_;
  long l_end_;
  long k_min_;
  long k_max_;
  std::vector<BigReal> tau_pow_;
  std::vector<std::vector<BigReal>> ladders_;  // ladders_[l][k_max - K]
};

}  // namespace species
