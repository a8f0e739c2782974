#pragma once

// Exact solvers for square assignment problems: min-sum (Hungarian method with
// potentials, O(n^3)) and min-max (threshold search + augmenting paths).

#include <algorithm>
#include <limits>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

struct Assignment {
  std::vector<std::size_t> row_to_col;
};

inline Assignment solve_min_cost_assignment(const SquareMatrix& cost) {
  const std::size_t n = cost.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0) throw ContractError("assignment cost matrix has non-finite entries");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment a;
  a.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) a.row_to_col[p[j] - 1] = j - 1;
  return a;
}

// Sum of assigned costs, accumulated in ascending order so that equal
// multisets of matched costs always produce the same double.
inline double assignment_cost(const SquareMatrix& cost, const Assignment& a) {
  std::vector<double> terms;
  terms.reserve(a.row_to_col.size());
  for (std::size_t i = 0; i < a.row_to_col.size(); ++i) terms.push_back(cost(i, a.row_to_col[i]));
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (const double t : terms) s += t;
  return s;
}

namespace detail {

// Does a perfect matching exist using only entries <= threshold?
inline bool has_perfect_matching(const SquareMatrix& cost, double threshold) {
  const std::size_t n = cost.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_col(n, none);
  std::vector<char> seen(n);

  // Recursion depth is bounded by n.
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t c = 0; c < n; ++c) {
      if (seen[c] || cost(row, c) > threshold) continue;
      seen[c] = 1;
      if (match_col[c] == none || self(self, match_col[c])) {
        match_col[c] = row;
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, r)) return false;
  }
  return true;
}

}  // namespace detail

// Minimal achievable maximum entry over all perfect matchings. The optimum is
// always one of the matrix entries, so binary search over the sorted distinct
// entries is exact.
inline double solve_bottleneck_assignment(const SquareMatrix& cost) {
  if (cost.size() == 0) return 0.0;
  std::vector<double> cand(cost.data());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (detail::has_perfect_matching(cost, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

}  // namespace topmix
