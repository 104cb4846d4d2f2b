#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "delstab/types.hpp"

namespace testing {

inline delstab::Point pt(std::initializer_list<double> xs) {
  delstab::Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

inline delstab::PointSet random_points(std::size_t n, int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<delstab::Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    delstab::Point p(m);
    for (int k = 0; k < m; ++k) p(k) = u(gen);
    pts.push_back(p);
  }
  return delstab::PointSet(std::move(pts));
}

inline delstab::PointSet grid_points(int side, int m, double spacing = 1.0) {
  std::vector<delstab::Point> pts;
  int total = 1;
  for (int k = 0; k < m; ++k) total *= side;
  for (int idx = 0; idx < total; ++idx) {
    delstab::Point p(m);
    int rest = idx;
    for (int k = 0; k < m; ++k) {
      p(k) = spacing * (rest % side);
      rest /= side;
    }
    pts.push_back(p);
  }
  return delstab::PointSet(std::move(pts));
}

}  // namespace testing
