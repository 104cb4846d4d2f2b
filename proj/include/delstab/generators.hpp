#pragma once

#include <cstdint>
#include <vector>

#include "delstab/types.hpp"

namespace delstab {

/// side^m lattice with the given spacing; each coordinate moved by a uniform
/// offset in [-jitter, jitter] * spacing.
PointSet jittered_grid(int side, int m, double spacing, double jitter, std::uint64_t seed);

/// n points uniform in [0, 1]^m.
PointSet uniform_box(std::size_t n, int m, std::uint64_t seed);

/// Protection of the audited two-ring when P_J is the whole deep interior; 0
/// when there are no deep points or the set is not generic there.
double interior_protection(const PointSet& points);

struct DeltaSearch {
  PointSet points;
  double delta = 0.0;
  std::vector<double> candidate_deltas;
  std::size_t best = 0;
};

/// Best of k jittered grids by interior protection (seeded, deterministic).
DeltaSearch delta_search(int side, int m, double spacing, double jitter, int k, std::uint64_t seed);

}  // namespace delstab
