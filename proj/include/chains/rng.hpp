#pragma once

// Seeded RNG with platform-independent double generation (std
// distributions are implementation-defined; plan files must be
// bit-reproducible across runs and toolchains).

#include "chains/geom.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace chains {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  /// Uniform direction on the unit sphere.
  Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chains
