#pragma once

#include <cstdint>
#include <random>

namespace kam {

/// mt19937_64 with a hand-rolled uniform: std distributions are not reproducible across
/// standard libraries, the raw engine output is.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kam
