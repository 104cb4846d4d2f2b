#include "delstab/types.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace delstab {

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  dim_ = static_cast<int>(points_.front().size());
  if (dim_ < 1) throw PreconditionError("points must have at least one coordinate");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim_)
      throw PreconditionError("point " + std::to_string(i) + " has dimension " +
                              std::to_string(points_[i].size()) + ", expected " +
                              std::to_string(dim_));
    if (!points_[i].allFinite())
      throw PreconditionError("point " + std::to_string(i) + " is not finite");
  }

  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(points_[a].begin(), points_[a].end(),
                                        points_[b].begin(), points_[b].end());
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_[order[k - 1]] == points_[order[k]])
      throw PreconditionError("duplicate points " + std::to_string(order[k - 1]) + " and " +
                              std::to_string(order[k]));
  }

  sparsity_ = points_.size() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double d = (points_[i] - points_[j]).norm();
      diameter_ = std::max(diameter_, d);
      sparsity_ = std::min(sparsity_, d);
    }
  }
}

int PointSet::affine_rank() const {
  if (points_.size() < 2) return 0;
  Matrix diffs(dim_, static_cast<Eigen::Index>(points_.size() - 1));
  for (std::size_t i = 1; i < points_.size(); ++i) diffs.col(i - 1) = points_[i] - points_[0];
  Eigen::JacobiSVD<Matrix> svd(diffs);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-12 * s(0)) ++rank;
  return rank;
}

}  // namespace delstab
