#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace symp {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Seeded random stream. Wraps mt19937_64 but generates uniforms and
/// normals itself so that output is identical across standard libraries.
/// Substreams are derived from (seed, id) and are independent of how
/// work is split across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {
    std::uint64_t s = seed;
    std::uint64_t init[4] = {detail::splitmix64(s), detail::splitmix64(s),
                             detail::splitmix64(s), detail::splitmix64(s)};
    std::seed_seq seq{init[0], init[1], init[2], init[3]};
    eng_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }

  /// Derived stream for worker/trial `id`; deterministic in (seed, id).
  Rng substream(std::uint64_t id) const {
    std::uint64_t s = seed_ ^ (0x517cc1b727220a95ULL * (id + 1));
    return Rng(detail::splitmix64(s));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection-free Lemire-style reduction is overkill here; modulo bias
    // is negligible for the n used (n << 2^64) but we keep it exact.
    std::uint64_t threshold = (-n) % n;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  /// Standard normal via Marsaglia polar method (platform-stable).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace symp
