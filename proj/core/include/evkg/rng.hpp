#pragma once

#include <cstdint>
#include <vector>

namespace evkg {

// splitmix64: tiny, seedable, stable across platforms. Used everywhere a
// reproducible stream matters; std:: distributions are implementation-defined
// so they never touch anything we need bit-identical.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mixes components into a derived stream seed (master seed + indices).
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0) {
  uint64_t s = a;
  (void)splitmix64(s);
  s ^= b * 0x9e3779b97f4a7c15ULL;
  (void)splitmix64(s);
  s ^= c * 0xc2b2ae3d27d4eb4fULL;
  uint64_t t = s;
  return splitmix64(t);
}

class DetRng {
 public:
  explicit DetRng(uint64_t seed) : state_(seed) {}

  uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, n) via 128-bit multiply-shift (no modulo bias worth
  // caring about at our n, and bit-stable everywhere).
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next()) * n) >> 64);
  }

  // Uniform double in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // Index drawn proportionally to weights (all > 0). Empty input is the
  // caller's bug; returns 0 defensively.
  size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0 || weights.empty()) return 0;
    double x = uniform() * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  uint64_t state_;
};

}  // namespace evkg
