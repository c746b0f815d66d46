#pragma once

// Counter-based random state (Philox4x32-10). The seed is the key, the stream
// occupies the high half of the 128-bit counter, and draws advance the low
// half, so (seed, stream) fixes the whole sequence and distinct streams never
// overlap. split(i) derives child streams for parallel replications.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "species/errors.hpp"

namespace species {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kM0 = 0xD2511F53U, kM1 = 0xCD9E8D57U;
  constexpr std::uint32_t kW0 = 0x9E3779B9U, kW1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

}  // namespace detail

class RandomState {
 public:
  using result_type = std::uint64_t;

  explicit RandomState(std::uint64_t seed = 42, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t position() const { return 2 * counter_ + (have_spare_ ? 1 : 0); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto block = detail::philox4x32_10(
        {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    ++counter_;
    spare_ = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    have_spare_ = true;
    return (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
  }

  /// Independent child stream with the same seed.
  RandomState split(std::uint64_t index) const {
    return RandomState(seed_, detail::splitmix64(stream_ ^ detail::splitmix64(index + 0x5851F42D4C957F2DULL)));
  }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential() { return -std::log(uniform()); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(*this); }

  double gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("RandomState::gamma: shape must be > 0");
    return std::gamma_distribution<double>(shape, 1.0)(*this);
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace species
