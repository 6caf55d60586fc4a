#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace crmm {

namespace detail {
// SplitMix64 finalizer.  Used for seed scrambling and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic, splittable random stream.
//
// The raw generator is std::mt19937_64, whose output sequence is pinned by
// the standard, so a (seed, stream path) pair reproduces bit-identical draws
// on every platform.  The distribution mappings (uniform, normal,
// exponential) are implemented here rather than taken from <random> because
// the standard leaves those algorithms implementation-defined.
//
// Stream splitting: split(k) derives the child seed by mixing the parent
// seed with the child index through SplitMix64.  Children are independent of
// the parent's draw position, so call sites can split eagerly (one stream
// per trial, per worker, ...) and draw in any order without coupling.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed)
      : seed_(seed), engine_(detail::splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  SplitRng split(std::uint64_t stream) const {
    return SplitRng(detail::splitmix64(seed_ ^ (0xA5A5A5A5A5A5A5A5ULL + stream)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe as a log argument.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via the Marsaglia polar method (no trig, spare cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Exponential with the given rate; strictly positive.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace crmm
