#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/ingestion.hpp"

namespace topmix {

enum class Stage { Encoded, Standardized, SymmetryBroken };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::Encoded: return "encoded";
    case Stage::Standardized: return "standardized";
    case Stage::SymmetryBroken: return "symmetry_broken";
  }
  return "?";
}

// Dense row-major n x m table of finite reals with per-row labels.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<std::string> column_names,
                std::vector<Label> labels, Stage stage = Stage::Encoded)
      : rows_(rows),
        cols_(cols),
        values_(rows * cols, 0.0),
        names_(std::move(column_names)),
        labels_(std::move(labels)),
        stage_(stage) {
    if (names_.size() != cols_) throw ContractError("column-name count does not match width");
    if (labels_.size() != rows_) throw ContractError("label count does not match row count");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  Stage stage() const noexcept { return stage_; }
  void set_stage(Stage s) noexcept { stage_ = s; }

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::vector<Label> labels_;
  Stage stage_ = Stage::Encoded;
};

enum class FitScope { FullDataset, TrainOnly };

struct StandardizationParams {
  std::vector<double> means;
  std::vector<double> stddevs;  // population convention, strictly positive
  FitScope scope = FitScope::FullDataset;

  std::size_t size() const noexcept { return means.size(); }
};

struct SymmetryVector {
  std::vector<double> components;

  std::size_t size() const noexcept { return components.size(); }
  bool operator==(const SymmetryVector&) const = default;
};

// Categorical attributes expand to one indicator column per domain token, in
// declared order; numeric attributes pass through.
inline FeatureMatrix one_hot_encode(const RawDataset& raw) {
  std::vector<std::string> names;
  for (const auto& a : raw.schema.attributes) {
    if (a.kind == AttributeKind::Numeric) {
      names.push_back(a.name);
    } else {
      for (const auto& tok : a.domain) names.push_back(a.name + "=" + tok);
    }
  }
  const std::size_t m = names.size();
  FeatureMatrix out(raw.rows.size(), m, std::move(names), raw.labels(), Stage::Encoded);
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& rec = raw.rows[i];
    if (rec.values.size() != raw.schema.attributes.size())
      throw ContractError("record " + std::to_string(i) + " does not match schema width");
    std::size_t col = 0;
    for (std::size_t a = 0; a < raw.schema.attributes.size(); ++a) {
      const auto& attr = raw.schema.attributes[a];
      if (attr.kind == AttributeKind::Numeric) {
        out(i, col++) = std::get<double>(rec.values[a]);
      } else {
        const auto idx = std::get<std::size_t>(rec.values[a]);
        out(i, col + idx) = 1.0;
        col += attr.domain.size();
      }
    }
  }
  return out;
}

// Per-column mean and population standard deviation over `fit_rows`
// (Welford's update).
inline StandardizationParams fit_standardizer(const FeatureMatrix& matrix, FitScope scope,
                                              std::span<const std::size_t> fit_rows) {
  if (fit_rows.empty()) throw FitError("standardizer fit set is empty");
  const std::size_t m = matrix.cols();
  StandardizationParams p;
  p.scope = scope;
  p.means.assign(m, 0.0);
  p.stddevs.assign(m, 0.0);
  std::vector<double> m2(m, 0.0);
  double count = 0.0;
  for (const auto r : fit_rows) {
    if (r >= matrix.rows()) throw ContractError("fit row " + std::to_string(r) + " out of range");
    count += 1.0;
    const auto row = matrix.row(r);
    for (std::size_t j = 0; j < m; ++j) {
      const double delta = row[j] - p.means[j];
      p.means[j] += delta / count;
      m2[j] += delta * (row[j] - p.means[j]);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double sd = std::sqrt(m2[j] / count);
    if (!(sd > 0.0) || !std::isfinite(sd))
      throw FitError("column '" + matrix.column_names()[j] + "' is constant over the fit rows");
    p.stddevs[j] = sd;
  }
  return p;
}

inline StandardizationParams fit_standardizer(const FeatureMatrix& matrix) {
  std::vector<std::size_t> all(matrix.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return fit_standardizer(matrix, FitScope::FullDataset, all);
}

inline FeatureMatrix standardize(FeatureMatrix matrix, const StandardizationParams& params) {
  if (params.size() != matrix.cols() || params.stddevs.size() != matrix.cols())
    throw ContractError("standardization params have " + std::to_string(params.size()) + " columns, matrix has " +
                        std::to_string(matrix.cols()));
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto row = matrix.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - params.means[j]) / params.stddevs[j];
  }
  matrix.set_stage(Stage::Standardized);
  return matrix;
}

// Adds v to every row. Pass require_standardized=false to apply it to an
// unstandardized matrix.
inline FeatureMatrix symmetry_break(FeatureMatrix matrix, const SymmetryVector& v,
                                    bool require_standardized = true) {
  if (v.size() != matrix.cols())
    throw ContractError("symmetry vector length " + std::to_string(v.size()) + " != matrix width " +
                        std::to_string(matrix.cols()));
  if (require_standardized && matrix.stage() != Stage::Standardized)
    throw ContractError("symmetry breaking expects a standardized matrix");
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto row = matrix.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += v.components[j];
  }
  matrix.set_stage(Stage::SymmetryBroken);
  return matrix;
}

// (5, 6, ..., m + 4)
inline SymmetryVector default_symmetry_vector(std::size_t m) {
  if (m == 0) throw ContractError("symmetry vector width must be positive");
  SymmetryVector v;
  v.components.resize(m);
  for (std::size_t j = 0; j < m; ++j) v.components[j] = static_cast<double>(j + 5);
  return v;
}

inline void write_feature_matrix(std::ostream& os, const FeatureMatrix& matrix, char delim = ',') {
  const auto& names = matrix.column_names();
  for (std::size_t j = 0; j < names.size(); ++j) os << names[j] << delim;
  os << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (const double v : matrix.row(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf << delim;
    }
    os << to_int(matrix.labels()[i]) << '\n';
  }
}

}  // namespace topmix
