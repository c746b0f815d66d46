#pragma once

// Arbitrary-precision real scalar on top of MPFR.
//
// Every value carries its own precision. Binary operators round to the
// larger of the two operand precisions, always to nearest. No global
// precision state is touched, so values may be used from several threads
// as long as a single object is not mutated concurrently.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "species/errors.hpp"

namespace species {

inline constexpr long kDefaultPrecisionBits = 256;
inline constexpr long kMinPrecisionBits = 64;

class BigReal {
 public:
  explicit BigReal(long precision_bits = kDefaultPrecisionBits) {
    mpfr_init2(v_, checked(precision_bits));
    mpfr_set_zero(v_, 1);
  }
  BigReal(double x, long precision_bits) {
    mpfr_init2(v_, checked(precision_bits));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  static BigReal from_long(long x, long precision_bits) {
    BigReal r(precision_bits);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static BigReal from_string(const std::string& s, long precision_bits) {
    BigReal r(precision_bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      throw DomainError("BigReal: cannot parse '" + s + "'");
    }
    return r;
  }

  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    // Steal the limbs and leave `o` as a valid 2-bit zero.
    std::swap(v_[0], o.v_[0]);
    mpfr_init2(o.v_, MPFR_PREC_MIN);
    mpfr_set_zero(o.v_, 1);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Base-2 exponent e with value = f * 2^e, 0.5 <= |f| < 1; LONG_MIN for 0.
  long exponent2() const {
    if (mpfr_zero_p(v_)) return std::numeric_limits<long>::min();
    return static_cast<long>(mpfr_get_exp(v_));
  }
  /// log(|x|) as a double, valid far outside the double exponent range.
  double log_abs() const {
    long e = 0;
    const double f = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log(std::fabs(f)) + static_cast<double>(e) * std::log(2.0);
  }
  std::string to_string(int digits = 20) const {
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigReal& operator+=(const BigReal& o) { return widen(o), mpfr_add(v_, v_, o.v_, MPFR_RNDN), *this; }
  BigReal& operator-=(const BigReal& o) { return widen(o), mpfr_sub(v_, v_, o.v_, MPFR_RNDN), *this; }
  BigReal& operator*=(const BigReal& o) { return widen(o), mpfr_mul(v_, v_, o.v_, MPFR_RNDN), *this; }
  BigReal& operator/=(const BigReal& o) { return widen(o), mpfr_div(v_, v_, o.v_, MPFR_RNDN), *this; }
  BigReal& operator+=(double d) { return mpfr_add_d(v_, v_, d, MPFR_RNDN), *this; }
  BigReal& operator-=(double d) { return mpfr_sub_d(v_, v_, d, MPFR_RNDN), *this; }
  BigReal& operator*=(double d) { return mpfr_mul_d(v_, v_, d, MPFR_RNDN), *this; }
  BigReal& operator/=(double d) { return mpfr_div_d(v_, v_, d, MPFR_RNDN), *this; }

  BigReal operator-() const {
    BigReal r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
  friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
  friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
  friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }
  friend BigReal operator+(BigReal a, double b) { return a += b; }
  friend BigReal operator-(BigReal a, double b) { return a -= b; }
  friend BigReal operator*(BigReal a, double b) { return a *= b; }
  friend BigReal operator/(BigReal a, double b) { return a /= b; }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  static mpfr_prec_t checked(long bits) {
    if (bits < 2 || bits > static_cast<long>(MPFR_PREC_MAX)) {
      throw DomainError("BigReal: precision out of range");
    }
    return static_cast<mpfr_prec_t>(bits);
  }
  // Raise our precision (keeping the value) if the other operand is wider.
  void widen(const BigReal& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) {
      mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    }
  }

  mpfr_t v_;
};

// Elementary functions. The result has the argument's precision.

#define SPECIES_BIGREAL_UNARY(name, mpfr_fn)      \
  inline BigReal name(const BigReal& x) {         \
    BigReal r(x.precision());                     \
    mpfr_fn(r.raw(), x.raw(), MPFR_RNDN);         \
    return r;                                     \
  }
SPECIES_BIGREAL_UNARY(exp, mpfr_exp)
SPECIES_BIGREAL_UNARY(log, mpfr_log)
SPECIES_BIGREAL_UNARY(sqrt, mpfr_sqrt)
SPECIES_BIGREAL_UNARY(abs, mpfr_abs)
SPECIES_BIGREAL_UNARY(tgamma, mpfr_gamma)
SPECIES_BIGREAL_UNARY(erfc, mpfr_erfc)
#undef SPECIES_BIGREAL_UNARY

inline BigReal floor(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_rint(r.raw(), x.raw(), MPFR_RNDD);
  return r;
}

inline BigReal ceil(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_rint(r.raw(), x.raw(), MPFR_RNDU);
  return r;
}

inline BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

inline BigReal pow(const BigReal& x, long k) {
  BigReal r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

inline BigReal lgamma(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_lngamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

/// E_1(x) = ∫_x^∞ e^{-t}/t dt for x > 0.
inline BigReal expint_e1(const BigReal& x) {
  BigReal neg = -x;
  BigReal r(x.precision());
  mpfr_eint(r.raw(), neg.raw(), MPFR_RNDN);  // Ei(-x) = -E1(x)
  mpfr_neg(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

inline BigReal pi(long precision_bits) {
  BigReal r(precision_bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

/// Correctly rounded sum of all terms at `precision_bits`.
inline BigReal exact_sum(std::span<const BigReal> terms, long precision_bits) {
  BigReal r(precision_bits);
  std::vector<mpfr_ptr> ptrs;
  ptrs.reserve(terms.size());
  for (const auto& t : terms) ptrs.push_back(const_cast<mpfr_ptr>(t.raw()));
  mpfr_sum(r.raw(), ptrs.data(), static_cast<unsigned long>(ptrs.size()), MPFR_RNDN);
  return r;
}

/// Relative distance |a-b| / max(|a|,|b|), 0 when both are zero.
inline double relative_difference(const BigReal& a, const BigReal& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  const long prec = std::max(a.precision(), b.precision());
  BigReal d = abs(a - b);
  BigReal scale = abs(a) > abs(b) ? abs(a) : abs(b);
  BigReal q(prec);
  mpfr_div(q.raw(), d.raw(), scale.raw(), MPFR_RNDN);
  return q.to_double();
}

}  // namespace species
