#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace topmix {

// Dense row-major n x n matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const SquareMatrix&) const = default;

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  // Symmetric, zero diagonal, finite and nonnegative.
  bool is_distance_like() const {
    if (!is_symmetric()) return false;
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0.0) return false;
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = (*this)(i, j);
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Intra-cloud Euclidean distances.
using PairwiseDistances = SquareMatrix;
// Pairwise diagram distances over a dataset.
using DistanceMatrix = SquareMatrix;

}  // namespace topmix
