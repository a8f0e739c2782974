#pragma once

// Dimension-0 persistence of the Rips filtration. Every point is born at 0;
// components merge exactly along minimum-spanning-tree edges, so the finite
// deaths are the Kruskal merge weights and the last component is capped at
// maxscale.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/pointcloud.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;

  double persistence() const noexcept { return death - birth; }
  bool operator==(const PersistencePair&) const = default;
  auto operator<=>(const PersistencePair& o) const {
    // (death, birth) order
    return std::tie(death, birth) <=> std::tie(o.death, o.birth);
  }
};

struct PersistenceDiagram {
  int dimension = 0;
  std::vector<PersistencePair> pairs;
  double maxscale = 0.0;

  std::size_t size() const noexcept { return pairs.size(); }
  bool operator==(const PersistenceDiagram&) const = default;

  bool well_formed() const {
    if (!(maxscale > 0.0)) return false;
    return std::all_of(pairs.begin(), pairs.end(), [&](const PersistencePair& p) {
      return 0.0 <= p.birth && p.birth <= p.death && p.death <= maxscale;
    });
  }
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

}  // namespace detail

inline PersistenceDiagram rips_dim0_diagram(const PairwiseDistances& distances, double maxscale) {
  if (!(maxscale > 0.0) || !std::isfinite(maxscale)) throw ContractError("maxscale must be positive and finite");
  const std::size_t n = distances.size();
  if (n == 0) throw ContractError("empty point cloud");

  struct Edge {
    double w;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (distances(i, i) != 0.0) throw ContractError("distance matrix has a nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = distances(i, j);
      if (w != distances(j, i)) throw ContractError("distance matrix is not symmetric");
      if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("distance matrix has a negative or non-finite entry");
      edges.push_back({w, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.w, a.i, a.j) < std::tie(b.w, b.i, b.j); });

  PersistenceDiagram dgm;
  dgm.dimension = 0;
  dgm.maxscale = maxscale;
  dgm.pairs.reserve(n);

  detail::DisjointSets sets(n);
  std::size_t components = n;
  for (const auto& e : edges) {
    if (components == 1) break;
    if (!sets.unite(e.i, e.j)) continue;
    if (e.w > maxscale) throw MaxscaleError(maxscale, e.w);
    dgm.pairs.push_back({0.0, e.w});
    --components;
  }
  dgm.pairs.push_back({0.0, maxscale});
  std::sort(dgm.pairs.begin(), dgm.pairs.end());
  return dgm;
}

inline PersistenceDiagram rips_dim0_diagram(const PointCloud& cloud, double maxscale) {
  return rips_dim0_diagram(pairwise_distances(cloud), maxscale);
}

// safety x (largest intra-cloud distance over every cloud). Any finite merge
// distance is bounded by that maximum, so the returned cap is always valid.
inline double choose_maxscale(std::span<const PairwiseDistances> clouds, double safety = 1.1) {
  if (clouds.empty()) throw ContractError("choose_maxscale needs at least one cloud");
  if (!(safety >= 1.0)) throw ContractError("maxscale safety factor must be >= 1");
  double m = 0.0;
  for (const auto& d : clouds) m = std::max(m, max_distance(d));
  // Coincident-point clouds have no positive distance; keep the cap positive.
  if (m == 0.0) m = 1.0;
  return safety * m;
}

inline double choose_maxscale(std::span<const PointCloud> clouds, double safety = 1.1) {
  std::vector<PairwiseDistances> d;
  d.reserve(clouds.size());
  for (const auto& c : clouds) d.push_back(pairwise_distances(c));
  return choose_maxscale(std::span<const PairwiseDistances>(d), safety);
}

}  // namespace topmix
