#pragma once

#include <cstddef>
#include <vector>

#include "delstab/types.hpp"

namespace delstab::detail {

// Calls f on every k-subset of {first, ..., n-1}, appended to `buf`, in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, std::size_t first, std::vector<VertexId>& buf,
                     F&& f) {
  if (k == 0) {
    f(buf);
    return;
  }
  for (std::size_t i = first; i + k <= n; ++i) {
    buf.push_back(i);
    for_each_subset(n, k - 1, i + 1, buf, f);
    buf.pop_back();
  }
}

}  // namespace delstab::detail
