#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "permeable/geometry.hpp"

namespace permeable {

/// Seeded generator whose draws are bit-identical across platforms: only the
/// raw 64-bit engine output is used, never the library distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  double normal() {
    // Box-Muller; u1 kept away from zero.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Point unit_vector(std::size_t dim) {
    for (;;) {
      std::vector<double> c(dim);
      double n2 = 0.0;
      for (double& v : c) {
        v = normal();
        n2 += v * v;
      }
      if (n2 > 1e-24) {
        const double n = std::sqrt(n2);
        for (double& v : c) v /= n;
        return Point(std::move(c));
      }
    }
  }

  /// Uniform point in the closed ball of the given radius around center.
  Point in_ball(const Point& center, double radius) {
    const std::size_t d = center.dim();
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(d));
    return center + unit_vector(d) * r;
  }

  Point in_box(const Point& lo, const Point& hi) {
    std::vector<double> c(lo.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = uniform(lo[i], hi[i]);
    return Point(std::move(c));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace permeable
