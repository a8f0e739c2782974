#pragma once

// Experiment harness on top of knn_predict: seeded hold-out and k-fold
// splits, k selection, confusion counts and derived metrics.
//
// Class 1 is the positive class: sensitivity is its recall, specificity the
// recall of class 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "topmix/error.hpp"
#include "topmix/ingestion.hpp"
#include "topmix/knn.hpp"
#include "topmix/square_matrix.hpp"

namespace topmix {

struct HoldOut {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct KFold {
  std::size_t folds = 10;
};

struct SplitSpec {
  std::variant<HoldOut, KFold> mode = HoldOut{};
  std::uint64_t seed = 0;
  bool stratified = false;

  void validate() const {
    if (const auto* h = std::get_if<HoldOut>(&mode)) {
      if (h->train <= 0.0 || h->validation < 0.0 || h->test < 0.0)
        throw ContractError("hold-out fractions must be nonnegative with a positive training share");
      if (std::abs(h->train + h->validation + h->test - 1.0) > 1e-9)
        throw ContractError("hold-out fractions must sum to 1");
    } else if (std::get<KFold>(mode).folds < 2) {
      throw ContractError("k-fold needs at least 2 folds");
    }
  }
};

// ---- metrics ------------------------------------------------------------------

struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  void add(Label truth, Label predicted) {
    if (truth == Label::Positive)
      ++(predicted == Label::Positive ? tp : fn);
    else
      ++(predicted == Label::Negative ? tn : fp);
  }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

// Percentages at full precision; nullopt where the denominator is zero.
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision0, precision1;
  std::optional<double> f1_0, f1_1;
};

namespace detail {

inline std::optional<double> percent(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

inline std::optional<double> f1(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall || *precision + *recall == 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / (*precision + *recall);
}

}  // namespace detail

inline Metrics compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw ContractError("metrics need at least one prediction");
  Metrics m;
  m.accuracy = detail::percent(c.tp + c.tn, c.total());
  m.sensitivity = detail::percent(c.tp, c.tp + c.fn);
  m.specificity = detail::percent(c.tn, c.tn + c.fp);
  m.precision0 = detail::percent(c.tn, c.tn + c.fn);
  m.precision1 = detail::percent(c.tp, c.tp + c.fp);
  m.f1_0 = detail::f1(m.precision0, m.specificity);
  m.f1_1 = detail::f1(m.precision1, m.sensitivity);
  return m;
}

struct Prediction {
  std::size_t row;
  Label truth;
  Label predicted;
  std::size_t group;  // fold index, or 0 = validation / 1 = test for hold-out
};

struct FoldResult {
  std::size_t fold;
  std::size_t k;
  ConfusionCounts counts;
};

struct EvaluationReport {
  ConfusionCounts counts;
  Metrics metrics;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;  // empty for hold-out
  std::vector<Prediction> predictions;
};

struct ValidationRow {
  std::size_t k;
  ConfusionCounts counts;
  Metrics metrics;
};

// ---- splits -------------------------------------------------------------------

struct HoldOutSplit {
  std::vector<std::size_t> train, validation, test;  // each sorted ascending
};

namespace detail {

inline std::vector<std::size_t> shuffled(std::vector<std::size_t> idx, std::mt19937_64& rng) {
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

inline std::array<std::vector<std::size_t>, 2> rows_by_class(std::span<const Label> labels) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out[to_int(labels[i])].push_back(i);
  return out;
}

inline void require_both_classes(std::span<const Label> rows_labels, const char* where) {
  const bool has0 = std::any_of(rows_labels.begin(), rows_labels.end(), [](Label l) { return l == Label::Negative; });
  const bool has1 = std::any_of(rows_labels.begin(), rows_labels.end(), [](Label l) { return l == Label::Positive; });
  if (!has0 || !has1) throw EvaluationError(std::string(where) + " does not contain both classes");
}

inline std::vector<Label> labels_of(std::span<const std::size_t> rows, std::span<const Label> labels) {
  std::vector<Label> out;
  out.reserve(rows.size());
  for (const auto r : rows) out.push_back(labels[r]);
  return out;
}

}  // namespace detail

// Validation and test sizes are floor(n * fraction); training takes the rest
// (n = 297 at 60:20:20 gives 179 / 59 / 59). With `stratified`, the same rule
// is applied within each class.
inline HoldOutSplit holdout_split(std::span<const Label> labels, const SplitSpec& spec) {
  spec.validate();
  const auto* h = std::get_if<HoldOut>(&spec.mode);
  if (!h) throw ContractError("holdout_split needs a hold-out split spec");
  std::mt19937_64 rng(spec.seed);
  HoldOutSplit s;

  auto deal = [&](const std::vector<std::size_t>& order) {
    const std::size_t n = order.size();
    const auto nval = static_cast<std::size_t>(static_cast<double>(n) * h->validation + 1e-9);
    const auto ntest = static_cast<std::size_t>(static_cast<double>(n) * h->test + 1e-9);
    const std::size_t ntrain = n - nval - ntest;
    s.train.insert(s.train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ntrain));
    s.validation.insert(s.validation.end(), order.begin() + static_cast<std::ptrdiff_t>(ntrain),
                        order.begin() + static_cast<std::ptrdiff_t>(ntrain + nval));
    s.test.insert(s.test.end(), order.begin() + static_cast<std::ptrdiff_t>(ntrain + nval), order.end());
  };

  if (spec.stratified) {
    for (const auto& cls : detail::rows_by_class(labels)) deal(detail::shuffled(cls, rng));
  } else {
    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), 0);
    deal(detail::shuffled(std::move(all), rng));
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

// Fold id per row: rows are shuffled (per class when stratified, classes
// concatenated) and dealt round-robin.
inline std::vector<std::size_t> kfold_assignment(std::span<const Label> labels, std::size_t folds,
                                                 std::uint64_t seed, bool stratified = false) {
  if (folds < 2) throw ContractError("k-fold needs at least 2 folds");
  if (folds > labels.size())
    throw EvaluationError("cannot split " + std::to_string(labels.size()) + " rows into " + std::to_string(folds) +
                          " folds");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order;
  if (stratified) {
    for (const auto& cls : detail::rows_by_class(labels)) {
      const auto s = detail::shuffled(cls, rng);
      order.insert(order.end(), s.begin(), s.end());
    }
  } else {
    order.resize(labels.size());
    std::iota(order.begin(), order.end(), 0);
    order = detail::shuffled(std::move(order), rng);
  }
  std::vector<std::size_t> fold_of(labels.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % folds;
  return fold_of;
}

// ---- classification runs ------------------------------------------------------

inline ConfusionCounts classify_rows(std::span<const std::size_t> queries, std::span<const std::size_t> candidates,
                                     const DistanceMatrix& distances, std::span<const Label> labels,
                                     const KnnConfig& config, std::size_t group = 0,
                                     std::vector<Prediction>* predictions = nullptr) {
  ConfusionCounts c;
  for (const auto q : queries) {
    const Label pred = knn_predict(q, candidates, distances, labels, config);
    c.add(labels[q], pred);
    if (predictions) predictions->push_back({q, labels[q], pred, group});
  }
  return c;
}

struct HoldOutResult {
  HoldOutSplit split;
  std::size_t chosen_k = 0;
  std::vector<ValidationRow> validation;
  EvaluationReport test;
};

// Picks k on the validation rows (highest accuracy, ties to the smaller k),
// then scores the test rows against the training rows with that k.
inline HoldOutResult evaluate_split(const DistanceMatrix& distances, std::span<const Label> labels,
                                    const SplitSpec& spec, std::span<const std::size_t> k_grid) {
  if (labels.size() != distances.size()) throw ContractError("label count does not match distance matrix");
  if (k_grid.empty()) throw ContractError("k grid is empty");
  detail::require_both_classes(labels, "dataset");

  HoldOutResult r;
  r.split = holdout_split(labels, spec);
  detail::require_both_classes(detail::labels_of(r.split.train, labels), "training split");
  if (r.split.validation.empty() || r.split.test.empty())
    throw EvaluationError("validation or test split is empty");

  std::vector<std::size_t> grid(k_grid.begin(), k_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() == 0) throw ContractError("k must be at least 1");
  if (grid.back() > r.split.train.size())
    throw EvaluationError("k = " + std::to_string(grid.back()) + " exceeds the training set");

  double best = -1.0;
  for (const auto k : grid) {
    const auto counts = classify_rows(r.split.validation, r.split.train, distances, labels, {k});
    const auto metrics = compute_metrics(counts);
    if (*metrics.accuracy > best) {
      best = *metrics.accuracy;
      r.chosen_k = k;
    }
    r.validation.push_back({k, counts, metrics});
  }

  r.test.k = r.chosen_k;
  r.test.seed = spec.seed;
  // Validation predictions at the chosen k are kept for audit (group 0).
  classify_rows(r.split.validation, r.split.train, distances, labels, {r.chosen_k}, 0, &r.test.predictions);
  r.test.counts =
      classify_rows(r.split.test, r.split.train, distances, labels, {r.chosen_k}, 1, &r.test.predictions);
  r.test.metrics = compute_metrics(r.test.counts);
  return r;
}

// K-fold run where each fold may bring its own distance matrix (needed when
// preprocessing is refit per fold). `matrix_for_fold(f)` returns the matrix
// used to classify fold f against the remaining folds.
template <typename MatrixForFold>
EvaluationReport evaluate_kfold_with(std::span<const Label> labels, std::span<const std::size_t> fold_of,
                                     std::size_t folds, std::size_t k, MatrixForFold&& matrix_for_fold) {
  if (k == 0) throw ContractError("k must be at least 1");
  if (fold_of.size() != labels.size()) throw ContractError("fold assignment does not cover every row");
  detail::require_both_classes(labels, "dataset");
  EvaluationReport rep;
  rep.k = k;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> queries, candidates;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? queries : candidates).push_back(i);
    if (candidates.size() < k)
      throw EvaluationError("fold " + std::to_string(f) + " has " + std::to_string(candidates.size()) +
                            " candidates, fewer than k = " + std::to_string(k));
    const DistanceMatrix& d = matrix_for_fold(f);
    const auto counts = classify_rows(queries, candidates, d, labels, {k}, f, &rep.predictions);
    rep.folds.push_back({f, k, counts});
    rep.counts += counts;
  }
  std::sort(rep.predictions.begin(), rep.predictions.end(),
            [](const Prediction& a, const Prediction& b) { return a.row < b.row; });
  rep.metrics = compute_metrics(rep.counts);
  return rep;
}

inline EvaluationReport evaluate_kfold(const DistanceMatrix& distances, std::span<const Label> labels,
                                       std::size_t folds, std::size_t k, std::uint64_t seed,
                                       bool stratified = false) {
  if (labels.size() != distances.size()) throw ContractError("label count does not match distance matrix");
  const auto fold_of = kfold_assignment(labels, folds, seed, stratified);
  auto rep = evaluate_kfold_with(labels, fold_of, folds, k, [&](std::size_t) -> const DistanceMatrix& {
    return distances;
  });
  rep.seed = seed;
  return rep;
}

enum class KSelection { Pooled, Nested };

struct KFoldSelection {
  std::size_t chosen_k = 0;               // pooled: argmax; nested: most frequent per-fold choice
  std::vector<ValidationRow> pooled_scores;  // pooled mode only
  EvaluationReport report;
};

namespace detail {

inline std::size_t argmax_accuracy(const std::vector<std::pair<std::size_t, double>>& scored) {
  std::size_t best_k = 0;
  double best = -1.0;
  for (const auto& [k, acc] : scored)
    if (acc > best) {
      best = acc;
      best_k = k;
    }
  return best_k;
}

}  // namespace detail

// Pooled: every k in the grid is run through the same folds and the k with
// the best pooled accuracy is reported. Nested: inside each outer fold, k is
// chosen by leave-one-fold-out over the remaining folds, then the outer fold
// is classified with it.
template <typename MatrixForFold>
KFoldSelection select_k_kfold_with(std::span<const Label> labels, std::span<const std::size_t> fold_of,
                                   std::size_t folds, std::span<const std::size_t> k_grid, KSelection mode,
                                   MatrixForFold&& matrix_for_fold) {
  if (k_grid.empty()) throw ContractError("k grid is empty");
  std::vector<std::size_t> grid(k_grid.begin(), k_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  KFoldSelection sel;
  if (mode == KSelection::Pooled) {
    std::vector<std::pair<std::size_t, double>> scored;
    std::vector<EvaluationReport> reports;
    for (const auto k : grid) {
      auto rep = evaluate_kfold_with(labels, fold_of, folds, k, matrix_for_fold);
      sel.pooled_scores.push_back({k, rep.counts, rep.metrics});
      scored.emplace_back(k, *rep.metrics.accuracy);
      reports.push_back(std::move(rep));
    }
    sel.chosen_k = detail::argmax_accuracy(scored);
    sel.report = std::move(reports[static_cast<std::size_t>(
        std::find(grid.begin(), grid.end(), sel.chosen_k) - grid.begin())]);
    return sel;
  }

  detail::require_both_classes(labels, "dataset");
  EvaluationReport rep;
  std::map<std::size_t, std::size_t> chosen_count;
  for (std::size_t f = 0; f < folds; ++f) {
    const DistanceMatrix& distances = matrix_for_fold(f);
    std::vector<std::size_t> queries, candidates;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? queries : candidates).push_back(i);

    std::vector<std::pair<std::size_t, double>> scored;
    for (const auto k : grid) {
      ConfusionCounts inner;
      for (std::size_t g = 0; g < folds; ++g) {
        if (g == f) continue;
        std::vector<std::size_t> iq, ic;
        for (const auto i : candidates) (fold_of[i] == g ? iq : ic).push_back(i);
        if (ic.size() < k) throw EvaluationError("inner fold has fewer candidates than k");
        inner += classify_rows(iq, ic, distances, labels, {k});
      }
      scored.emplace_back(k, *compute_metrics(inner).accuracy);
    }
    const std::size_t k = detail::argmax_accuracy(scored);
    if (candidates.size() < k) throw EvaluationError("fold has fewer candidates than k");
    ++chosen_count[k];
    const auto counts = classify_rows(queries, candidates, distances, labels, {k}, f, &rep.predictions);
    rep.folds.push_back({f, k, counts});
    rep.counts += counts;
  }
  std::sort(rep.predictions.begin(), rep.predictions.end(),
            [](const Prediction& a, const Prediction& b) { return a.row < b.row; });
  rep.metrics = compute_metrics(rep.counts);
  std::size_t best = 0;
  for (const auto& [k, n] : chosen_count)
    if (n > best) {
      best = n;
      sel.chosen_k = k;
    }
  rep.k = sel.chosen_k;
  sel.report = std::move(rep);
  return sel;
}

inline KFoldSelection select_k_kfold(const DistanceMatrix& distances, std::span<const Label> labels,
                                     std::size_t folds, std::span<const std::size_t> k_grid, std::uint64_t seed,
                                     bool stratified = false, KSelection mode = KSelection::Pooled) {
  if (labels.size() != distances.size()) throw ContractError("label count does not match distance matrix");
  const auto fold_of = kfold_assignment(labels, folds, seed, stratified);
  auto sel = select_k_kfold_with(labels, fold_of, folds, k_grid, mode,
                                 [&](std::size_t) -> const DistanceMatrix& { return distances; });
  sel.report.seed = seed;
  return sel;
}

}  // namespace topmix
