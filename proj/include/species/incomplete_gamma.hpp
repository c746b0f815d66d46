#pragma once

// Upper incomplete gamma Γ(a; x) = ∫_x^∞ t^{a-1} e^{-t} dt for real a and
// x > 0, in arbitrary precision.
//
// Negative a is reached by the downward recurrence
//   Γ(a-1; x) = (Γ(a; x) - x^{a-1} e^{-x}) / (a-1),
// which is forward-stable for a < 0. Seeds come from the power series
// (non-integer a) or from E_1 (a = 0). Because the alternating sums of the
// species model need Γ(c + k; x) on whole unit-spaced ladders, the ladder is
// the primitive and the single-point function is a ladder of length one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "species/bigreal.hpp"

namespace species {
namespace detail {

inline long exponent_or_min(const BigReal& v) {
  return v.is_zero() ? -(1L << 40) : v.exponent2();
}

// Γ(a; x) from Γ(a) - γ(a, x) with γ(a, x) = x^a e^{-x} Σ_k x^k / (a)_{k+1}.
// Valid for any non-integer a. Adds guard bits until the subtraction has lost
// fewer bits than it was given.
inline BigReal upper_gamma_series(const BigReal& a, const BigReal& x, long precision_bits) {
  long guard = 64;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const long w = precision_bits + guard;
    BigReal aw(w), xw(w);
    mpfr_set(aw.raw(), a.raw(), MPFR_RNDN);
    mpfr_set(xw.raw(), x.raw(), MPFR_RNDN);

    BigReal term(w), sum(w), denom(w);
    mpfr_ui_div(term.raw(), 1, aw.raw(), MPFR_RNDN);
    mpfr_set(sum.raw(), term.raw(), MPFR_RNDN);
    mpfr_set(denom.raw(), aw.raw(), MPFR_RNDN);
    const double xd = x.to_double();
    const double ad = a.to_double();
    for (long k = 1;; ++k) {
      mpfr_add_ui(denom.raw(), denom.raw(), 1, MPFR_RNDN);
      mpfr_mul(term.raw(), term.raw(), xw.raw(), MPFR_RNDN);
      mpfr_div(term.raw(), term.raw(), denom.raw(), MPFR_RNDN);
      mpfr_add(sum.raw(), sum.raw(), term.raw(), MPFR_RNDN);
      if (static_cast<double>(k) + ad > xd + 1.0 && !term.is_zero() &&
          exponent_or_min(term) < exponent_or_min(sum) - w - 2) {
        break;
      }
      if (k > 100000000L) throw ConvergenceError("upper_incomplete_gamma: series did not converge");
    }
    BigReal lower = pow(xw, aw);
    BigReal emx = exp(-xw);
    lower *= emx;
    lower *= sum;
    BigReal full = tgamma(aw);
    BigReal result = full - lower;
    const long loss = std::max(exponent_or_min(full), exponent_or_min(lower)) - exponent_or_min(result);
    if (loss < guard - 16) {
      BigReal out(precision_bits);
      mpfr_set(out.raw(), result.raw(), MPFR_RNDN);
      return out;
    }
    guard = loss + 64;
  }
  throw ConvergenceError("upper_incomplete_gamma: cancellation not resolved");
}

// Legendre continued fraction (modified Lentz), used for large x.
inline BigReal upper_gamma_continued_fraction(const BigReal& a, const BigReal& x, long precision_bits) {
  const long w = precision_bits + 32;
  BigReal aw(w), xw(w);
  mpfr_set(aw.raw(), a.raw(), MPFR_RNDN);
  mpfr_set(xw.raw(), x.raw(), MPFR_RNDN);
  BigReal tiny(w);
  mpfr_set_ui_2exp(tiny.raw(), 1, -(w + 200), MPFR_RNDN);

  BigReal b = xw + 1.0 - aw;
  BigReal c(w), d(w), h(w), an(w), del(w), tmp(w);
  mpfr_ui_div(c.raw(), 1, tiny.raw(), MPFR_RNDN);
  mpfr_ui_div(d.raw(), 1, b.raw(), MPFR_RNDN);
  mpfr_set(h.raw(), d.raw(), MPFR_RNDN);
  for (long i = 1;; ++i) {
    // an = -i (i - a)
    mpfr_ui_sub(an.raw(), static_cast<unsigned long>(i), aw.raw(), MPFR_RNDN);
    mpfr_mul_si(an.raw(), an.raw(), -i, MPFR_RNDN);
    mpfr_add_ui(b.raw(), b.raw(), 2, MPFR_RNDN);
    mpfr_mul(d.raw(), an.raw(), d.raw(), MPFR_RNDN);
    mpfr_add(d.raw(), d.raw(), b.raw(), MPFR_RNDN);
    if (d.is_zero()) mpfr_set(d.raw(), tiny.raw(), MPFR_RNDN);
    mpfr_div(tmp.raw(), an.raw(), c.raw(), MPFR_RNDN);
    mpfr_add(c.raw(), b.raw(), tmp.raw(), MPFR_RNDN);
    if (c.is_zero()) mpfr_set(c.raw(), tiny.raw(), MPFR_RNDN);
    mpfr_ui_div(d.raw(), 1, d.raw(), MPFR_RNDN);
    mpfr_mul(del.raw(), d.raw(), c.raw(), MPFR_RNDN);
    mpfr_mul(h.raw(), h.raw(), del.raw(), MPFR_RNDN);
    mpfr_sub_ui(tmp.raw(), del.raw(), 1, MPFR_RNDN);
    if (tmp.is_zero() || exponent_or_min(tmp) < -w) break;
    if (i > 10000000L) throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge");
  }
  BigReal result = pow(xw, aw) * exp(-xw) * h;
  BigReal out(precision_bits);
  mpfr_set(out.raw(), result.raw(), MPFR_RNDN);
  return out;
}

// Single value for a non-integer a, or a > 0.
inline BigReal upper_gamma_seed(const BigReal& a, const BigReal& x, long precision_bits) {
  const double xd = x.to_double();
  const double ad = a.to_double();
  if (xd > 40.0 && xd > ad + 20.0) return upper_gamma_continued_fraction(a, x, precision_bits);
  return upper_gamma_series(a, x, precision_bits);
}

// Walk Γ down from `start` (value at a = a_start) for `steps` unit steps,
// calling sink(i, value) for the value at a_start - i, i = 0..steps.
// If the walk reaches a = 0 exactly, Γ(0; x) = E_1(x) is substituted.
template <class Sink>
void walk_down(BigReal value, const BigReal& a_start, const BigReal& x, long steps, long w, Sink&& sink) {
  BigReal a(w), xw(w), power(w), tmp(w);
  mpfr_set(a.raw(), a_start.raw(), MPFR_RNDN);
  mpfr_set(xw.raw(), x.raw(), MPFR_RNDN);
  // power = x^{a} e^{-x}
  power = pow(xw, a) * exp(-xw);
  sink(0, value);
  for (long i = 1; i <= steps; ++i) {
    mpfr_div(power.raw(), power.raw(), xw.raw(), MPFR_RNDN);  // x^{a-1} e^{-x}
    mpfr_sub_ui(a.raw(), a.raw(), 1, MPFR_RNDN);
    if (a.is_zero()) {
      value = expint_e1(xw);
    } else {
      mpfr_sub(tmp.raw(), value.raw(), power.raw(), MPFR_RNDN);
      mpfr_div(value.raw(), tmp.raw(), a.raw(), MPFR_RNDN);
    }
    sink(i, value);
  }
}

}  // namespace detail

/// Γ(a_top - i; x) for i = 0..count-1 at `precision_bits`.
inline std::vector<BigReal> upper_incomplete_gamma_ladder(const BigReal& a_top, std::size_t count,
                                                          const BigReal& x, long precision_bits) {
  if (!(x.sign() > 0) || !x.is_finite()) throw DomainError("upper_incomplete_gamma: x must be > 0");
  if (!a_top.is_finite()) throw DomainError("upper_incomplete_gamma: a must be finite");
  if (precision_bits < kMinPrecisionBits) throw DomainError("upper_incomplete_gamma: precision below 64 bits");
  std::vector<BigReal> out(count, BigReal(precision_bits));
  if (count == 0) return out;

  const double xd = x.to_double();
  // Each downward step can lose up to log2(x) bits to cancellation.
  const long w = precision_bits + 64 +
                 static_cast<long>(count) * static_cast<long>(std::ceil(std::log2(std::clamp(xd, 2.0, 1e300))));
  const long last = static_cast<long>(count) - 1;
  auto store = [&](long i, const BigReal& v) {
    if (i >= 0 && i <= last) mpfr_set(out[static_cast<std::size_t>(i)].raw(), v.raw(), MPFR_RNDN);
  };

  // Index of the ladder point a_s = a_top - i_s in (-1/2, 1/2].
  BigReal shifted(w);
  mpfr_set(shifted.raw(), a_top.raw(), MPFR_RNDN);
  shifted -= 0.5;
  const long i_s = mpfr_get_si(ceil(shifted).raw(), MPFR_RNDN);

  if (i_s > last) {
    // Every point exceeds 1/2: one downward walk from the top is stable.
    BigReal seed = detail::upper_gamma_seed(a_top, x, w);
    detail::walk_down(std::move(seed), a_top, x, last, w, store);
    return out;
  }

  // Lower part: seed at a_s (E_1 when the ladder is integral), walk down.
  BigReal a_s(w);
  mpfr_set(a_s.raw(), a_top.raw(), MPFR_RNDN);
  mpfr_sub_si(a_s.raw(), a_s.raw(), i_s, MPFR_RNDN);
  BigReal seed_low = a_s.is_zero() ? expint_e1(BigReal(x)) : detail::upper_gamma_seed(a_s, x, w);
  if (seed_low.precision() < w) mpfr_prec_round(seed_low.raw(), w, MPFR_RNDN);
  detail::walk_down(std::move(seed_low), a_s, x, last - i_s, w,
                    [&](long i, const BigReal& v) { store(i + i_s, v); });

  // Upper part (points >= a_s + 1): seed at the top, walk down to a_s + 1.
  if (i_s >= 1) {
    BigReal seed = detail::upper_gamma_seed(a_top, x, w);
    detail::walk_down(std::move(seed), a_top, x, i_s - 1, w, store);
  }
  return out;
}

/// Γ(a; x) for real a and x > 0.
inline BigReal upper_incomplete_gamma(const BigReal& a, const BigReal& x, long precision_bits) {
  return std::move(upper_incomplete_gamma_ladder(a, 1, x, precision_bits).front());
}

inline BigReal upper_incomplete_gamma(double a, double x, long precision_bits = kDefaultPrecisionBits) {
  const long w = std::max<long>(precision_bits, 64);
  return upper_incomplete_gamma(BigReal(a, w), BigReal(x, w), precision_bits);
}

}  // namespace species
