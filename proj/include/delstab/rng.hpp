#pragma once

// Seeded randomness with a fully specified output sequence. The standard
// distributions are implementation-defined, so uniform and normal variates
// are derived here from raw mt19937_64 words.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "delstab/types.hpp"

namespace delstab {

/// splitmix64 finaliser; derives independent stream seeds from (seed, stream).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - uniform();  // (0, 1]
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * std::numbers::pi * v);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * v);
  }

  Point unit_vector(int m) {
    Point p(m);
    do {
      for (int k = 0; k < m; ++k) p(k) = normal();
    } while (p.norm() == 0.0);
    return p / p.norm();
  }

  /// Uniform in the closed ball of radius r.
  Point in_ball(int m, double r) {
    return unit_vector(m) * (r * std::pow(uniform(), 1.0 / m));
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace delstab
