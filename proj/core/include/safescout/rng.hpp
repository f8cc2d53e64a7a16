#pragma once

#include <cstdint>
#include <random>

namespace safescout {

// All randomness in the library flows through this wrapper around
// std::mt19937_64. The raw engine output is standard-specified, and every
// derived draw below is implemented here rather than via the (unspecified)
// standard distribution adaptors, so a given seed yields the same stream on
// every build of this library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // True with probability p. Exact for p = 0 and p = 1.
  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform on {0, ..., n-1}, unbiased via rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 step (Steele et al. constants). Used to derive independent
// substream seeds from a master seed: replication i uses substream_seed(seed, i).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace safescout
