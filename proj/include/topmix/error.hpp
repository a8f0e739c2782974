#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topmix {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (width mismatch, bad index, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `row()` is the zero-based data row, or npos when the
// error is not tied to a row.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t row = npos)
      : Error(row == npos ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// A categorical token outside its declared domain, or an inconsistent schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Standardizer cannot be fit (constant column, empty fit set).
class FitError : public Error {
 public:
  using Error::Error;
};

// Filtration cap smaller than a finite merge distance.
class MaxscaleError : public Error {
 public:
  MaxscaleError(double maxscale, double merge)
      : Error("maxscale too small: " + std::to_string(maxscale) + " < merge distance " +
              std::to_string(merge)),
        maxscale_(maxscale),
        merge_(merge) {}

  double maxscale() const noexcept { return maxscale_; }
  double merge_distance() const noexcept { return merge_; }

 private:
  double maxscale_;
  double merge_;
};

// Degenerate split or fold during classification experiments.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace topmix
