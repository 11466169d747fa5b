#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dd {

/// Deterministic Gaussian sampler. Uniform variates take the top 53 bits of
/// mt19937_64 (whose sequence is fixed by the standard) and Box-Muller is
/// applied by hand, so streams are bit-reproducible across platforms and
/// standard library versions.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dd
