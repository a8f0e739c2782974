#pragma once

// Text renderings of evaluation results: a human-readable table, a
// `name=value` listing, and the per-row prediction audit list. Percentages are
// rounded to two decimals here and nowhere else.

#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "topmix/evaluation.hpp"

namespace topmix {

inline std::string format_percent(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

inline void write_metrics_kv(std::ostream& os, const std::string& prefix, const ConfusionCounts& c,
                             const Metrics& m) {
  os << prefix << "tp=" << c.tp << '\n'
     << prefix << "tn=" << c.tn << '\n'
     << prefix << "fp=" << c.fp << '\n'
     << prefix << "fn=" << c.fn << '\n'
     << prefix << "accuracy=" << format_percent(m.accuracy) << '\n'
     << prefix << "sensitivity=" << format_percent(m.sensitivity) << '\n'
     << prefix << "specificity=" << format_percent(m.specificity) << '\n'
     << prefix << "precision_class0=" << format_percent(m.precision0) << '\n'
     << prefix << "precision_class1=" << format_percent(m.precision1) << '\n'
     << prefix << "f1_class0=" << format_percent(m.f1_0) << '\n'
     << prefix << "f1_class1=" << format_percent(m.f1_1) << '\n';
}

inline void write_report_kv(std::ostream& os, const EvaluationReport& r) {
  os << "k=" << r.k << '\n' << "seed=" << r.seed << '\n';
  write_metrics_kv(os, "", r.counts, r.metrics);
  for (const auto& f : r.folds) {
    const std::string prefix = "fold" + std::to_string(f.fold) + ".";
    os << prefix << "k=" << f.k << '\n';
    write_metrics_kv(os, prefix, f.counts, compute_metrics(f.counts));
  }
}

inline void write_validation_kv(std::ostream& os, std::span<const ValidationRow> rows) {
  for (const auto& v : rows) write_metrics_kv(os, "validation.k" + std::to_string(v.k) + ".", v.counts, v.metrics);
}

inline void write_validation_table(std::ostream& os, std::span<const ValidationRow> rows) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%6s %12s %12s %12s\n", "k", "accuracy", "sensitivity", "specificity");
  os << buf;
  for (const auto& v : rows) {
    std::snprintf(buf, sizeof buf, "%6zu %12s %12s %12s\n", v.k, format_percent(v.metrics.accuracy).c_str(),
                  format_percent(v.metrics.sensitivity).c_str(), format_percent(v.metrics.specificity).c_str());
    os << buf;
  }
}

inline void write_report_table(std::ostream& os, const EvaluationReport& r) {
  const auto& m = r.metrics;
  char buf[160];
  os << "k = " << r.k << ", seed = " << r.seed << ", n = " << r.counts.total() << '\n';
  os << "confusion: TP=" << r.counts.tp << " TN=" << r.counts.tn << " FP=" << r.counts.fp << " FN=" << r.counts.fn
     << '\n';
  std::snprintf(buf, sizeof buf, "%10s %12s %12s %10s %10s %10s %10s\n", "accuracy", "sensitivity", "specificity",
                "prec(0)", "prec(1)", "F1(0)", "F1(1)");
  os << buf;
  std::snprintf(buf, sizeof buf, "%10s %12s %12s %10s %10s %10s %10s\n", format_percent(m.accuracy).c_str(),
                format_percent(m.sensitivity).c_str(), format_percent(m.specificity).c_str(),
                format_percent(m.precision0).c_str(), format_percent(m.precision1).c_str(),
                format_percent(m.f1_0).c_str(), format_percent(m.f1_1).c_str());
  os << buf;
  if (!r.folds.empty()) {
    os << "per fold:\n";
    for (const auto& f : r.folds) {
      const auto fm = compute_metrics(f.counts);
      std::snprintf(buf, sizeof buf, "  fold %2zu  k=%-3zu n=%-4zu accuracy %s\n", f.fold, f.k, f.counts.total(),
                    format_percent(fm.accuracy).c_str());
      os << buf;
    }
  }
}

inline void write_predictions(std::ostream& os, std::span<const Prediction> preds, const char* group_name) {
  os << "row," << group_name << ",truth,predicted\n";
  for (const auto& p : preds)
    os << p.row << ',' << p.group << ',' << to_int(p.truth) << ',' << to_int(p.predicted) << '\n';
}

}  // namespace topmix
