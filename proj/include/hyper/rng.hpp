#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace hyper {

// Counter-based SplitMix64: draw k of stream s depends only on (seed, s, k),
// and the uniform/normal transforms avoid <random> distributions, whose
// output differs between standard libraries.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return mix(seed_ ^ mix(stream_ + 0x632be59bd9b4e019ULL) ^ mix(counter_++ * 0x9e3779b97f4a7c15ULL)); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, one variate per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  CounterRng substream(std::uint64_t s) const { return CounterRng(seed_, mix(stream_ * 31 + s + 1)); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace hyper
