#pragma once

// Goodness-of-fit statistics shared by the statistical tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace species::testing {

/// sup |F_a - F_b| of the two empirical distribution functions.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, k = 0;
  double d = 0.0;
  while (i < a.size() && k < b.size()) {
    const double x = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= x) ++i;
    while (k < b.size() && b[k] <= x) ++k;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(k) / nb));
  }
  return d;
}

/// sup |F_n - F| against a continuous reference cdf.
template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf&& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Total variation distance between the empirical law of integer draws and
/// a probability vector.
inline double total_variation(const std::vector<long>& draws, const std::vector<double>& probs) {
  std::vector<double> freq(probs.size(), 0.0);
  double outside = 0.0;
  const double w = 1.0 / static_cast<double>(draws.size());
  for (long k : draws) {
    if (k >= 0 && static_cast<std::size_t>(k) < probs.size()) {
      freq[static_cast<std::size_t>(k)] += w;
    } else {
      outside += w;
    }
  }
  double tv = outside;
  for (std::size_t k = 0; k < probs.size(); ++k) tv += std::fabs(freq[k] - probs[k]);
  return 0.5 * tv;
}

}  // namespace species::testing
