#include "delstab/predicates.hpp"

#include <cmath>

namespace delstab {

namespace detail {

namespace {

// Gaussian elimination over the rationals; returns rank and, for square
// input, the determinant sign through `sign`.
int eliminate(std::vector<std::vector<Rational>>& rows, int* sign) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows[0].size() : 0;
  int s = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t piv = r;
    while (piv < nr && rows[piv][c] == 0) ++piv;
    if (piv == nr) continue;
    if (piv != r) {
      std::swap(rows[piv], rows[r]);
      s = -s;
    }
    if (rows[r][c] < 0) s = -s;
    for (std::size_t i = r + 1; i < nr; ++i) {
      if (rows[i][c] == 0) continue;
      const Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < nc; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  if (sign) *sign = (r == nr && nr == nc) ? s : 0;
  return static_cast<int>(r);
}

}  // namespace

int determinant_sign(std::vector<std::vector<Rational>> rows) {
  int sign = 0;
  eliminate(rows, &sign);
  return sign;
}

int rank(std::vector<std::vector<Rational>> rows) { return eliminate(rows, nullptr); }

}  // namespace detail

namespace {

// Sign of a floating determinant when it clears a conservative error margin
// relative to the Hadamard bound; 0 means "undecided".
int filtered_sign(const Matrix& a) {
  double hadamard = 1.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) hadamard *= a.col(c).norm();
  if (hadamard == 0.0) return 0;
  const double det = a.partialPivLu().determinant();
  if (std::abs(det) > 1e-8 * hadamard) return det > 0 ? 1 : -1;
  return 0;
}

}  // namespace

int orientation(std::span<const Point> points) {
  const auto m = static_cast<Eigen::Index>(points.size()) - 1;
  if (m < 1 || points[0].size() != m)
    throw PreconditionError("orientation needs m+1 points in R^m");
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) a.col(i) = points[i + 1] - points[0];
  if (const int s = filtered_sign(a); s != 0) return s;

  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(m));
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      rows[r][c] = Rational(points[c + 1](r)) - Rational(points[0](r));
  return detail::determinant_sign(std::move(rows));
}

int insphere(std::span<const Point> simplex, const Point& q) {
  const auto m = static_cast<Eigen::Index>(simplex.size()) - 1;
  if (m < 1 || simplex[0].size() != m) throw PreconditionError("insphere needs an m-simplex in R^m");
  const int orient = orientation(simplex);
  if (orient == 0) throw PreconditionError("insphere on a degenerate simplex");

  // Lifted orientation of (p_0..p_m, q) relative to q, in coordinates
  // (x - q, |x - q|^2).
  Matrix a(m + 1, m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) {
    const Point d = simplex[i] - q;
    a.block(0, i, m, 1) = d;
    a(m, i) = d.squaredNorm();
  }
  int lifted = filtered_sign(a);
  if (lifted == 0) {
    std::vector<std::vector<Rational>> rows(m + 1, std::vector<Rational>(m + 1));
    for (Eigen::Index i = 0; i <= m; ++i) {
      Rational norm2 = 0;
      for (Eigen::Index r = 0; r < m; ++r) {
        const Rational d = Rational(simplex[i](r)) - Rational(q(r));
        rows[r][i] = d;
        norm2 += d * d;
      }
      rows[m][i] = norm2;
    }
    lifted = detail::determinant_sign(std::move(rows));
  }
  // For a positively oriented simplex the lifted determinant has sign (-1)^m
  // when q is inside.
  const int inside_sign = (m % 2 == 0) ? 1 : -1;
  return lifted * orient * inside_sign;
}

int affine_rank_exact(std::span<const Point> points) {
  if (points.size() < 2) return 0;
  const auto m = points[0].size();
  std::vector<std::vector<Rational>> rows(points.size() - 1, std::vector<Rational>(m));
  for (std::size_t i = 1; i < points.size(); ++i)
    for (Eigen::Index c = 0; c < m; ++c)
      rows[i - 1][c] = Rational(points[i](c)) - Rational(points[0](c));
  return detail::rank(std::move(rows));
}

}  // namespace delstab
