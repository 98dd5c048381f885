#pragma once

// Deterministic, platform-independent randomness. Every stochastic routine
// in the library derives a private stream from (seed, index, ...) so results
// do not depend on scheduling or on the standard library's distributions.

#include <cmath>
#include <cstdint>
#include <cstddef>

namespace arbiterlab::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Hash-combines stream labels into a starting state.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x6a09e667f3bcc909ull + a;
  splitmix64(s);
  s ^= 0xbb67ae8584caa73bull + b;
  return s;
}

class Rng {
public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  bool next_bool() { return next_u64() & 1; }

  /// Poisson sample via chunked Knuth products (exact for moderate means).
  std::size_t next_poisson(double lambda) {
    std::size_t total = 0;
    while (lambda > 16.0) {
      total += poisson_knuth(16.0);
      lambda -= 16.0;
    }
    total += poisson_knuth(lambda);
    return total;
  }

private:
  std::size_t poisson_knuth(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::size_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_unit();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_;
};

}  // namespace arbiterlab::rng
