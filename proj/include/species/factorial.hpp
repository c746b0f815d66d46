#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "species/bigreal.hpp"

namespace species {

/// (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1.
inline BigReal rising_factorial(const BigReal& a, long m) {
  if (m < 0) throw DomainError("rising_factorial: m must be nonnegative");
  BigReal r = BigReal::from_long(1, a.precision());
  BigReal f(a);
  for (long i = 0; i < m; ++i) {
    r *= f;
    f += 1.0;
  }
  return r;
}

inline BigReal rising_factorial(double a, long m, long precision_bits = kDefaultPrecisionBits) {
  return rising_factorial(BigReal(a, precision_bits), m);
}

/// Non-central generalized factorial coefficients 𝒢(n, k; σ, r), defined by
///   (σt + r)_n = Σ_{k=0}^n 𝒢(n, k; σ, r) (t)_k
/// with rising factorials on both sides. Rows follow
///   𝒢(n+1, k) = σ 𝒢(n, k-1) + (r + n - kσ) 𝒢(n, k),  𝒢(0, 0) = 1.
class GfcTable {
 public:
  GfcTable(const BigReal& sigma, const BigReal& r, long max_n)
      : sigma_(sigma), r_(r), max_n_(max_n) {
    if (max_n < 0) throw DomainError("GfcTable: max_n must be nonnegative");
    const long prec = std::max(sigma.precision(), r.precision());
    rows_.reserve(static_cast<std::size_t>(max_n) + 1);
    rows_.push_back({BigReal::from_long(1, prec)});
    for (long n = 0; n < max_n; ++n) rows_.push_back(next_row(rows_.back(), n, sigma, r));
  }

  long max_n() const { return max_n_; }
  const BigReal& sigma() const { return sigma_; }
  const BigReal& r() const { return r_; }

  const BigReal& operator()(long n, long k) const {
    if (n < 0 || n > max_n_) throw IndexError("GfcTable: n out of range");
    if (k < 0 || k > n) throw IndexError("GfcTable: k out of range [0, n]");
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

  const std::vector<BigReal>& row(long n) const {
    if (n < 0 || n > max_n_) throw IndexError("GfcTable: n out of range");
    return rows_[static_cast<std::size_t>(n)];
  }

  /// Row n+1 from row n.
  static std::vector<BigReal> next_row(const std::vector<BigReal>& row, long n, const BigReal& sigma,
                                       const BigReal& r) {
    const long prec = row.front().precision();
    std::vector<BigReal> out(row.size() + 1, BigReal(prec));
    BigReal coeff(prec), tmp(prec);
    for (std::size_t k = 0; k <= row.size(); ++k) {
      if (k > 0) mpfr_mul(out[k].raw(), sigma.raw(), row[k - 1].raw(), MPFR_RNDN);
      if (k < row.size()) {
        // coeff = r + n - kσ
        mpfr_mul_ui(coeff.raw(), sigma.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_sub(coeff.raw(), r.raw(), coeff.raw(), MPFR_RNDN);
        mpfr_add_si(coeff.raw(), coeff.raw(), n, MPFR_RNDN);
        mpfr_mul(tmp.raw(), coeff.raw(), row[k].raw(), MPFR_RNDN);
        mpfr_add(out[k].raw(), out[k].raw(), tmp.raw(), MPFR_RNDN);
      }
    }
    return out;
  }

 private:
  BigReal sigma_;
  BigReal r_;
  long max_n_;
  std::vector<std::vector<BigReal>> rows_;
};

/// Row n of the coefficient table without keeping earlier rows.
inline std::vector<BigReal> gfc_row(long n, const BigReal& sigma, const BigReal& r) {
  if (n < 0) throw IndexError("gfc_row: n must be nonnegative");
  std::vector<BigReal> row{BigReal::from_long(1, std::max(sigma.precision(), r.precision()))};
  for (long i = 0; i < n; ++i) row = GfcTable::next_row(row, i, sigma, r);
  return row;
}

inline BigReal gfc(long n, long k, const BigReal& sigma, const BigReal& r) {
  if (n < 0 || k < 0 || k > n) {
    throw IndexError("gfc: need 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (!(sigma.sign() > 0) || !(sigma < BigReal(1.0, sigma.precision()))) {
    throw DomainError("gfc: sigma must lie in (0, 1)");
  }
  return gfc_row(n, sigma, r)[static_cast<std::size_t>(k)];
}

inline BigReal gfc(long n, long k, double sigma, double r, long precision_bits = kDefaultPrecisionBits) {
  return gfc(n, k, BigReal(sigma, precision_bits), BigReal(r, precision_bits));
}

}  // namespace species
