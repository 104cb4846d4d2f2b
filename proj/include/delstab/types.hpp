#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace delstab {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VertexId = std::size_t;

/// Selects the serial reference kernel or its OpenMP counterpart.
enum class Exec { serial, parallel };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (rank, genericity, budget range).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Ordered, duplicate-free set of finite points sharing one ambient dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  int dim() const { return dim_; }
  const Point& operator[](VertexId i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  double diameter() const { return diameter_; }
  double min_pairwise_distance() const { return sparsity_; }
  /// Dimension of the affine hull.
  int affine_rank() const;

 private:
  std::vector<Point> points_;
  int dim_ = 0;
  double diameter_ = 0.0;
  double sparsity_ = 0.0;
};

}  // namespace delstab
