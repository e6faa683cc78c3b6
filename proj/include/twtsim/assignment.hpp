#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "twtsim/core.hpp"

namespace twtsim {

/// Rows are stations, columns are RUs.
struct CostMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  CostMatrix() = default;
  CostMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(c)];
  }
  double& at(int r, int c) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(c)];
  }
};

struct AssignmentResult {
  std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
  double total = 0.0;
};

namespace detail {

/// O(n^3) Hungarian method via shortest augmenting paths on the square
/// matrix `get(i, j)`, 0-based. Returns row match per column.
template <typename Cost>
std::vector<int> hungarian_square(int n, Cost get) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);    // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = get(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    row_of_col[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
  return row_of_col;
}

inline AssignmentResult solve_padded(const CostMatrix& cm, bool maximize) {
  for (double x : cm.a)
    if (!std::isfinite(x)) throw ConfigError("cost matrix entries must be finite");
  AssignmentResult res;
  if (cm.rows == 0 || cm.cols == 0) return res;
  const int n = std::max(cm.rows, cm.cols);
  // Dummy rows/cols carry zero cost and are stripped from the output.
  auto get = [&](int i, int j) -> double {
    if (i >= cm.rows || j >= cm.cols) return 0.0;
    return maximize ? -cm.at(i, j) : cm.at(i, j);
  };
  const auto row_of_col = hungarian_square(n, get);
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j) {
    const int i = row_of_col[static_cast<std::size_t>(j)];
    if (i < cm.rows && j < cm.cols) pairs.emplace_back(i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  res.pairs = std::move(pairs);
  for (const auto& [r, c] : res.pairs) res.total += cm.at(r, c);
  return res;
}

}  // namespace detail

/// Minimum-cost one-to-one matching of min(rows, cols) pairs. Rectangular
/// inputs are padded to square with zero-cost dummies.
inline AssignmentResult solve_min_assignment(const CostMatrix& cm) {
  return detail::solve_padded(cm, /*maximize=*/false);
}

/// Maximum-value counterpart, implemented by negating entries.
inline AssignmentResult solve_max_assignment(const CostMatrix& cm) {
  return detail::solve_padded(cm, /*maximize=*/true);
}

}  // namespace twtsim
