#pragma once

// Wasserstein and bottleneck distances between persistence diagrams.
//
// Both diagrams are augmented with the other's diagonal projections so that a
// bijection always exists:
//
//            | D2 points          | diagonal slots (n1) |
//   D1 pts   | |x - y|_inf^p      | pers(x)^p           |
//   diag(n2) | pers(y)^p          | 0                   |
//
// with pers((b, d)) = (d - b) / 2, the L-infinity distance to the diagonal.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "topmix/assignment.hpp"
#include "topmix/error.hpp"
#include "topmix/parallel.hpp"
#include "topmix/persistence.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

inline double linf(const PersistencePair& a, const PersistencePair& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double diagonal_distance(const PersistencePair& a) { return (a.death - a.birth) / 2.0; }

struct MatchingProblem {
  enum class Entry { PointPoint, PointDiagonal, DiagonalPoint, DiagonalDiagonal };

  SquareMatrix cost;
  std::size_t n1 = 0;  // points of the first diagram (rows 0..n1)
  std::size_t n2 = 0;  // points of the second diagram (cols 0..n2)

  Entry kind(std::size_t row, std::size_t col) const {
    const bool rp = row < n1, cp = col < n2;
    if (rp && cp) return Entry::PointPoint;
    if (rp) return Entry::PointDiagonal;
    if (cp) return Entry::DiagonalPoint;
    return Entry::DiagonalDiagonal;
  }
};

namespace detail {

inline void check_comparable(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.dimension != b.dimension)
    throw ContractError("diagrams have different homology dimensions (" + std::to_string(a.dimension) + " vs " +
                        std::to_string(b.dimension) + ")");
  if (a.maxscale != b.maxscale)
    throw ContractError("diagrams have different filtration caps (" + std::to_string(a.maxscale) + " vs " +
                        std::to_string(b.maxscale) + ")");
}

inline double power(double x, double p) { return p == 1.0 ? x : std::pow(x, p); }

// Strict weak order used to orient the pair before solving so that
// f(a, b) and f(b, a) run the identical computation.
inline bool canonical_less(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() < b.pairs.size();
  return std::lexicographical_compare(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
                                      [](const PersistencePair& x, const PersistencePair& y) {
                                        return std::tie(x.birth, x.death) < std::tie(y.birth, y.death);
                                      });
}

// Drops (0, maxscale) pairs present in both diagrams. For well-formed
// diagrams this is exact for every p: with x = (0, M) and births >= 0,
// deaths <= M, any z, y satisfy |z - y|_inf <= max(|z - x|_inf, |x - y|_inf)
// and pers(z) <= pers(x), so an optimal matching can always pair the two
// copies of x at zero cost. Removing them up front keeps the result
// bit-identical instead of leaving it to the solver's tie-breaking.
inline std::pair<PersistenceDiagram, PersistenceDiagram> cancel_shared_essential(const PersistenceDiagram& a,
                                                                                 const PersistenceDiagram& b) {
  std::pair<PersistenceDiagram, PersistenceDiagram> out{a, b};
  if (!a.well_formed() || !b.well_formed()) return out;
  const PersistencePair ess{0.0, a.maxscale};
  const auto ca = std::count(a.pairs.begin(), a.pairs.end(), ess);
  const auto cb = std::count(b.pairs.begin(), b.pairs.end(), ess);
  auto drop = [&](std::vector<PersistencePair>& v, std::ptrdiff_t k) {
    for (auto it = v.begin(); k > 0 && it != v.end();) {
      if (*it == ess) {
        it = v.erase(it);
        --k;
      } else {
        ++it;
      }
    }
  };
  drop(out.first.pairs, std::min(ca, cb));
  drop(out.second.pairs, std::min(ca, cb));
  return out;
}

}  // namespace detail

// `p` = 1 gives raw L-infinity costs (also what the bottleneck search uses).
inline MatchingProblem build_matching_problem(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                                              double p = 1.0) {
  MatchingProblem mp;
  mp.n1 = d1.size();
  mp.n2 = d2.size();
  const std::size_t n = mp.n1 + mp.n2;
  mp.cost = SquareMatrix(n, 0.0);
  for (std::size_t i = 0; i < mp.n1; ++i) {
    const auto& x = d1.pairs[i];
    for (std::size_t j = 0; j < mp.n2; ++j) mp.cost(i, j) = detail::power(linf(x, d2.pairs[j]), p);
    const double to_diag = detail::power(diagonal_distance(x), p);
    for (std::size_t j = mp.n2; j < n; ++j) mp.cost(i, j) = to_diag;
  }
  for (std::size_t j = 0; j < mp.n2; ++j) {
    const double to_diag = detail::power(diagonal_distance(d2.pairs[j]), p);
    for (std::size_t i = mp.n1; i < n; ++i) mp.cost(i, j) = to_diag;
  }
  return mp;
}

inline double wasserstein(const PersistenceDiagram& d1, const PersistenceDiagram& d2, double p = 1.0) {
  detail::check_comparable(d1, d2);
  if (!(p >= 1.0) || !std::isfinite(p)) throw ContractError("wasserstein order p must be finite and >= 1");
  const auto [a, b] = detail::cancel_shared_essential(d1, d2);
  const bool swap = detail::canonical_less(b, a);
  const auto mp = swap ? build_matching_problem(b, a, p) : build_matching_problem(a, b, p);
  if (mp.cost.size() == 0) return 0.0;
  const double total = assignment_cost(mp.cost, solve_min_cost_assignment(mp.cost));
  return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

inline double bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  detail::check_comparable(d1, d2);
  const auto [a, b] = detail::cancel_shared_essential(d1, d2);
  const bool swap = detail::canonical_less(b, a);
  const auto mp = swap ? build_matching_problem(b, a) : build_matching_problem(a, b);
  return solve_bottleneck_assignment(mp.cost);
}

// Symmetric matrix of W_p over all unordered pairs; each entry is computed
// independently, so the result does not depend on `threads`.
inline DistanceMatrix distance_matrix(std::span<const PersistenceDiagram> diagrams, double p = 1.0,
                                      unsigned threads = 1) {
  const std::size_t n = diagrams.size();
  for (std::size_t i = 1; i < n; ++i) detail::check_comparable(diagrams[0], diagrams[i]);
  DistanceMatrix out(n, 0.0);
  if (n < 2) return out;
  // Row i owns entries (i, j > i); rows are claimed dynamically.
  parallel_for(n - 1, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = wasserstein(diagrams[i], diagrams[j], p);
      out(i, j) = w;
      out(j, i) = w;
    }
  });
  return out;
}

}  // namespace topmix
