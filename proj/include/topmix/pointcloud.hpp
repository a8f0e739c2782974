#pragma once

// Projection point clouds: a record X' in R^m becomes the m + 1 points
// [X', p_1(X'), ..., p_m(X')], where p_i zeroes coordinate i.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::size_t source_row = 0) : dim_(dim), source_row_(source_row) {}

  // Convenience for tests and small fixtures.
  static PointCloud from_points(const std::vector<std::vector<double>>& pts, std::size_t source_row = 0) {
    PointCloud c(pts.empty() ? 0 : pts.front().size(), source_row);
    for (const auto& p : pts) c.push_back(p);
    return c;
  }

  void push_back(std::span<const double> p) {
    if (p.size() != dim_) throw ContractError("point dimension " + std::to_string(p.size()) + " != cloud dimension " +
                                              std::to_string(dim_));
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t ambient_dim() const noexcept { return dim_; }
  std::size_t source_row() const noexcept { return source_row_; }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

 private:
  std::size_t dim_ = 0;
  std::size_t source_row_ = 0;
  std::vector<double> coords_;
};

// Zero coordinate `i` (1-based, matching p_1 .. p_m).
inline std::vector<double> project(std::span<const double> x, std::size_t i) {
  if (i < 1 || i > x.size())
    throw ContractError("projection index " + std::to_string(i) + " outside 1.." + std::to_string(x.size()));
  std::vector<double> out(x.begin(), x.end());
  out[i - 1] = 0.0;
  return out;
}

inline PointCloud build_point_cloud(std::span<const double> x, std::size_t row = 0) {
  PointCloud cloud(x.size(), row);
  cloud.push_back(x);
  for (std::size_t i = 1; i <= x.size(); ++i) cloud.push_back(project(x, i));
  return cloud;
}

inline PairwiseDistances pairwise_distances(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  PairwiseDistances d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = cloud.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  }
  return d;
}

inline double max_distance(const PairwiseDistances& d) {
  double m = 0.0;
  for (const double v : d.data()) m = v > m ? v : m;
  return m;
}

// One point per line.
inline void write_point_cloud(std::ostream& os, const PointCloud& cloud, char delim = ',') {
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k) os << delim;
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace topmix
