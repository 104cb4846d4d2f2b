#pragma once

// Dense two-phase simplex method with Bland's rule. Instantiated with double
// (as a filter) and with GMP rationals (exact decisions on dyadic inputs).

#include <cstddef>
#include <vector>

namespace delstab::lp {

enum class Status { optimal, infeasible, unbounded };

template <class T>
struct Result {
  Status status = Status::infeasible;
  T value{};
  std::vector<T> x;
};

namespace detail {

template <class T>
struct Tableau {
  std::vector<std::vector<T>> rows;  // constraint rows, last entry is rhs
  std::vector<std::size_t> basis;
  std::size_t cols = 0;              // number of variables

  void pivot(std::size_t r, std::size_t c) {
    const T piv = rows[r][c];
    for (auto& v : rows[r]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const T f = rows[i][c];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j <= cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    basis[r] = c;
  }

  // Minimises cost over the columns [0, active). Returns false when unbounded.
  bool minimise(const std::vector<T>& cost, std::size_t active, const T& eps) {
    for (;;) {
      std::size_t enter = active;
      for (std::size_t j = 0; j < active && enter == active; ++j) {
        T reduced = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i) reduced -= cost[basis[i]] * rows[i][j];
        if (reduced < -eps) enter = j;
      }
      if (enter == active) return true;
      std::size_t leave = rows.size();
      T best{};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i][enter] > eps)) continue;
        const T ratio = rows[i][cols] / rows[i][enter];
        if (leave == rows.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

/// Maximises objective . x subject to a x = b, x >= 0. `eps` is the pivot
/// tolerance (zero for exact scalars).
template <class T>
Result<T> maximise(const std::vector<std::vector<T>>& a, const std::vector<T>& b,
                   const std::vector<T>& objective, const T& eps) {
  const std::size_t m = a.size();
  const std::size_t n = objective.size();
  detail::Tableau<T> tab;
  tab.cols = n + m;
  tab.rows.assign(m, std::vector<T>(n + m + 1, T(0)));
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < T(0);
    for (std::size_t j = 0; j < n; ++j) tab.rows[i][j] = flip ? T(-a[i][j]) : a[i][j];
    tab.rows[i][n + i] = T(1);
    tab.rows[i][n + m] = flip ? T(-b[i]) : b[i];
    tab.basis[i] = n + i;
  }

  std::vector<T> phase1(n + m, T(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = T(1);
  tab.minimise(phase1, n + m, eps);
  T infeasibility(0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] >= n) infeasibility += tab.rows[i][n + m];
  Result<T> res;
  if (infeasibility > eps) {
    res.status = Status::infeasible;
    return res;
  }

  // Drive artificials out of the basis; drop rows that are redundant.
  for (std::size_t i = 0; i < tab.rows.size();) {
    if (tab.basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      T v = tab.rows[i][j];
      if (v < T(0)) v = -v;
      if (v > eps) {
        col = j;
        break;
      }
    }
    if (col == n) {
      tab.rows.erase(tab.rows.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }

  std::vector<T> cost(n + m, T(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = -objective[j];
  if (!tab.minimise(cost, n, eps)) {
    res.status = Status::unbounded;
    return res;
  }
  res.status = Status::optimal;
  res.x.assign(n, T(0));
  for (std::size_t i = 0; i < tab.rows.size(); ++i)
    if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.rows[i][n + m];
  res.value = T(0);
  for (std::size_t j = 0; j < n; ++j) res.value += objective[j] * res.x[j];
  return res;
}

}  // namespace delstab::lp
