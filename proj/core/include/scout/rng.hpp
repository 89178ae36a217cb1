#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace scout {

// SplitMix64 finalizer, used for seed scrambling and stream derivation.
inline constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// PCG32 (XSH-RR). Every random draw in the project goes through this
// generator and the samplers below; std:: distributions are not bit-portable
// across standard libraries, so they are never used.
class Pcg32 {
 public:
  Pcg32() : Pcg32(0, 0) {}
  explicit Pcg32(uint64_t seed, uint64_t stream = 0) {
    inc_ = (stream << 1u) | 1u;
    state_ = 0;
    next_u32();
    state_ += splitmix64(seed);
    next_u32();
  }

  uint32_t next_u32() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Unbiased integer in [0, bound); bound must be positive.
  uint32_t bounded(uint32_t bound) {
    uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  // Double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(bounded(static_cast<uint32_t>(hi - lo + 1)));
  }

  // Knuth's product-of-uniforms sampler; exact and portable for the small
  // means used by the world generators.
  int poisson(double mean) {
    double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = bounded(static_cast<uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  uint64_t inc_;
};

// Stream id from a tuple of lane values. Parallel and serial execution derive
// the same child generators because streams depend only on these tuples,
// never on scheduling order.
inline uint64_t mix_stream(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline Pcg32 child_rng(uint64_t seed, std::initializer_list<uint64_t> parts) {
  return Pcg32(seed, mix_stream(parts));
}

}  // namespace scout
