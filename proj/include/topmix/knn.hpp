#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <tuple>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/ingestion.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

// Majority ties (possible for even k) go to the class whose tied neighbors
// have the smaller summed distance, then to the smaller label.
struct KnnConfig {
  std::size_t k = 5;
};

struct Neighbor {
  std::size_t index;
  double distance;
};

// The k candidates closest to `query`, ordered by (distance, index).
inline std::vector<Neighbor> nearest_neighbors(std::size_t query, std::span<const std::size_t> candidates,
                                               const DistanceMatrix& distances, std::size_t k) {
  if (query >= distances.size()) throw ContractError("query index out of range");
  if (k > candidates.size())
    throw ContractError("k = " + std::to_string(k) + " exceeds " + std::to_string(candidates.size()) +
                        " candidates");
  std::vector<Neighbor> all;
  all.reserve(candidates.size());
  for (const auto c : candidates) {
    if (c == query) throw ContractError("query row " + std::to_string(query) + " is among its own candidates");
    if (c >= distances.size()) throw ContractError("candidate index out of range");
    all.push_back({c, distances(query, c)});
  }
  const auto by_rank = [](const Neighbor& a, const Neighbor& b) {
    return std::tie(a.distance, a.index) < std::tie(b.distance, b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), by_rank);
  all.resize(k);
  return all;
}

inline Label knn_predict(std::size_t query, std::span<const std::size_t> candidates, const DistanceMatrix& distances,
                         std::span<const Label> labels, const KnnConfig& config) {
  if (config.k == 0) throw ContractError("k must be at least 1");
  if (labels.size() != distances.size()) throw ContractError("label count does not match distance matrix");
  const auto nn = nearest_neighbors(query, candidates, distances, config.k);

  std::array<std::size_t, 2> votes{0, 0};
  std::array<double, 2> summed{0.0, 0.0};
  for (const auto& n : nn) {
    const int c = to_int(labels[n.index]);
    ++votes[c];
    summed[c] += n.distance;
  }
  if (votes[0] != votes[1]) return votes[0] > votes[1] ? Label::Negative : Label::Positive;
  return summed[1] < summed[0] ? Label::Positive : Label::Negative;
}

}  // namespace topmix
