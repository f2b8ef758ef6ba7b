#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "qdm/core.hpp"

namespace qdm {

/// Counter-based pseudo-random stream (splitmix64 core). Every draw is a
/// pure function of (seed, stream, position within the stream), so Monte
/// Carlo batches can be sharded across threads in any order and still
/// reproduce bit-identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed + kGamma) ^ mix(stream * kGamma + 1))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform in (0, 1]; never returns zero, so it is safe under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Circularly symmetric complex Gaussian with E|n|^2 = total_variance.
  std::complex<double> next_complex_gaussian(double total_variance) {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-total_variance * std::log(u1));
    return std::polar(radius, two_pi * u2);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qdm
