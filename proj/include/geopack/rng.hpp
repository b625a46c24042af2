#pragma once

#include <cstdint>

// Counter-based deterministic RNG. Every randomized routine in the library
// draws from (seed, stream, counter) triples so that results are identical
// across platforms, standard-library versions, and degrees of parallelism.
// std::uniform_*_distribution is deliberately avoided: its output is not
// portable across implementations.

namespace geopack {

// Fixed stream ids; routines must not share a stream for unrelated purposes.
enum class RngStream : std::uint64_t {
  instance_gen = 1,
  selection = 2,
  ordering_samples = 3,
  sparsify = 4,
  trials = 5,
  calibration = 6,
  vc_probe = 7,
  measure_cover = 8,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  Rng(std::uint64_t seed, RngStream stream, std::uint64_t substream = 0)
      : base_(mix3(seed, static_cast<std::uint64_t>(stream), substream)) {}

  std::uint64_t next_u64() { return detail::splitmix64(base_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // 53-bit mantissa in [0, 1); identical on every IEEE-754 platform.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) {
      (void)next_u64();  // keep the draw count independent of p
      return false;
    }
    if (p >= 1.0) {
      (void)next_u64();
      return true;
    }
    return next_double() < p;
  }

  // Uniform integer in [0, n) via 128-bit multiply (no rejection loop, exact
  // enough for instance generation and unbiased to ~2^-64).
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) {
      (void)next_u64();
      return 0;
    }
    unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  // Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    if (hi <= lo) {
      (void)next_u64();
      return lo;
    }
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  static std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = detail::splitmix64(a);
    h = detail::splitmix64(h ^ (0x9e3779b97f4a7c15ULL + b));
    h = detail::splitmix64(h ^ (0xc2b2ae3d27d4eb4fULL + c));
    return h;
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace geopack
