#pragma once

#include <cstdint>
#include <vector>

namespace dsg {

// splitmix64 finalizer; a full-period mixing of the 64-bit counter.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based uniform stream: every draw is a pure function of
// (seed, stream, counter). Parallel consumers each get their own stream id,
// so results do not depend on scheduling.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : state_(mix64(mix64(seed) ^ mix64(stream ^ 0x5851f42d4c957f2dULL))) {}

  uint64_t next_u64() {
    state_ = mix64(state_ ^ (++counter_));
    return state_;
  }

  // Uniform in [0, 1).
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Inverse-CDF draw over nonnegative weights; weights need not be normalized.
  int sample(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = u01() * total;
    for (size_t k = 0; k + 1 < weights.size(); ++k) {
      u -= weights[k];
      if (u < 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  uint64_t state_;
  uint64_t counter_ = 0;
};

}  // namespace dsg
