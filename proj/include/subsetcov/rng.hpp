#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

// Counter-based random streams: every draw is a pure function of
// (seed, key path, counter), so codebook entry m depends only on its own key
// and enlarging a codebook preserves earlier entries exactly.
// The mixer is the SplitMix64 finalizer (public-domain constants).

namespace subsetcov {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  // Chains seed and path words into a stream key.
  explicit CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {})
      : key_(mix64(seed)) {
    for (std::uint64_t w : path) key_ = mix64(key_ ^ w) + kGolden;
  }

  std::uint64_t word(std::uint64_t counter) const { return mix64(key_ + counter * kGolden); }

  // 53-bit uniform in [0, 1).
  double uniform01(std::uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  // Inverse-CDF draw from a discrete pmf (row of nonnegative reals, sum ~ 1).
  int sample(std::uint64_t counter, const std::vector<double>& pmf) const {
    double u = uniform01(counter);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
      acc += pmf[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace subsetcov
