#pragma once

// Orientation and in-sphere predicates with a floating-point filter and an
// exact rational fallback. Every finite double is a dyadic rational, so the
// fallback decides the sign of the true determinant.

#include <span>

#include <boost/multiprecision/gmp.hpp>

#include "delstab/types.hpp"

namespace delstab {

using Rational = boost::multiprecision::mpq_rational;

/// Sign of det[p_1 - p_0, ..., p_m - p_0] for m+1 points in R^m.
int orientation(std::span<const Point> points);

/// +1 if q lies strictly inside the circumsphere of the m-simplex, -1 if
/// strictly outside, 0 if on it. The simplex must be non-degenerate.
int insphere(std::span<const Point> simplex, const Point& q);

/// Exact dimension of the affine hull.
int affine_rank_exact(std::span<const Point> points);

namespace detail {
/// Sign of the determinant of a square rational matrix (row-major).
int determinant_sign(std::vector<std::vector<Rational>> rows);
int rank(std::vector<std::vector<Rational>> rows);
}  // namespace detail

}  // namespace delstab
