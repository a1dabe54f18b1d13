#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace freshx {

/// Seeded random source for the synthetic-data generators.  The stream is
/// pinned: mt19937_64 words, 53-bit uniforms, Box-Muller normals.  The std
/// distribution adaptors are implementation defined and are deliberately
/// not used, so equal seeds reproduce equal experiments everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw via the Box-Muller transform.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - uniform() lies in (0, 1], keeping the log argument positive.
    double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    double theta = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased integer in [0, n) by rejection sampling; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t x = gen_();
      if (x >= threshold) return x % n;
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace freshx
