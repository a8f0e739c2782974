#pragma once

// End-to-end experiment: ingest -> one-hot -> standardize -> symmetry break
// -> projection clouds -> dim-0 diagrams -> Wasserstein matrix -> k-NN
// evaluation, with content-addressed caches for the two expensive stages.
//
// Experiment config (JSON; relative paths resolve against the config file):
//
//   {
//     "data": {"path": "processed.cleveland.data", "delimiter": ",", "header": false},
//     "schema": "cleveland.schema.json",
//     "symmetry_vector": "default",          // or "zero", or [c1, ..., cm]
//     "standardization": "full_dataset",     // or "train_only"
//     "maxscale": {"safety": 1.1},           // or {"value": 40.0}
//     "p": 1,
//     "split": {"mode": "holdout", "train": 0.6, "validation": 0.2, "test": 0.2,
//               "seed": 0, "stratified": false},
//           // or {"mode": "kfold", "folds": 10, "seed": 0, "stratified": false,
//           //     "k_selection": "pooled" | "nested"}
//     "k": 5,                                // optional; fixes k instead of searching k_grid
//     "k_grid": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
//     "cache_dir": "cache", "out_dir": "out", "threads": 0   // 0 = hardware concurrency
//   }

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "topmix/artifacts.hpp"
#include "topmix/diagram_metric.hpp"
#include "topmix/error.hpp"
#include "topmix/evaluation.hpp"
#include "topmix/ingestion.hpp"
#include "topmix/knn.hpp"
#include "topmix/parallel.hpp"
#include "topmix/persistence.hpp"
#include "topmix/pointcloud.hpp"
#include "topmix/preprocessing.hpp"
#include "topmix/report.hpp"

namespace topmix {

enum class SymmetryMode { Default, Explicit, Zero };

struct ExperimentConfig {
  std::string data_path;
  std::string schema_path;
  ParseOptions parse;
  SymmetryMode symmetry = SymmetryMode::Default;
  std::vector<double> symmetry_components;  // Explicit only
  FitScope fit_scope = FitScope::FullDataset;
  double maxscale_safety = 1.1;
  std::optional<double> maxscale;  // explicit cap overrides the safety factor
  double p = 1.0;
  SplitSpec split;
  KSelection k_selection = KSelection::Pooled;
  std::optional<std::size_t> k;
  std::vector<std::size_t> k_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string cache_dir = "cache";
  std::string out_dir = "out";
  unsigned threads = 0;

  bool is_kfold() const { return std::holds_alternative<KFold>(split.mode); }
  unsigned worker_count() const { return threads == 0 ? default_threads() : threads; }
};

namespace detail {

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  try {
    const auto& jd = j.at("data");
    c.data_path = detail::resolve(base_dir, jd.at("path").get<std::string>());
    const auto delim = jd.value("delimiter", std::string(","));
    if (delim.size() != 1) throw ContractError("config: delimiter must be a single character");
    c.parse.delimiter = delim[0];
    c.parse.header = jd.value("header", false);
    c.schema_path = detail::resolve(base_dir, j.at("schema").get<std::string>());

    if (j.contains("symmetry_vector")) {
      const auto& sv = j.at("symmetry_vector");
      if (sv.is_array()) {
        c.symmetry = SymmetryMode::Explicit;
        c.symmetry_components = sv.get<std::vector<double>>();
      } else {
        const auto s = sv.get<std::string>();
        if (s == "default")
          c.symmetry = SymmetryMode::Default;
        else if (s == "zero")
          c.symmetry = SymmetryMode::Zero;
        else
          throw ContractError("config: unknown symmetry_vector '" + s + "'");
      }
    }
    const auto scope = j.value("standardization", std::string("full_dataset"));
    if (scope == "full_dataset")
      c.fit_scope = FitScope::FullDataset;
    else if (scope == "train_only")
      c.fit_scope = FitScope::TrainOnly;
    else
      throw ContractError("config: unknown standardization '" + scope + "'");

    if (j.contains("maxscale")) {
      const auto& jm = j.at("maxscale");
      if (jm.contains("value")) c.maxscale = jm.at("value").get<double>();
      c.maxscale_safety = jm.value("safety", 1.1);
    }
    c.p = j.value("p", 1.0);

    if (j.contains("split")) {
      const auto& js = j.at("split");
      const auto mode = js.value("mode", std::string("holdout"));
      if (mode == "holdout") {
        HoldOut h;
        h.train = js.value("train", 0.6);
        h.validation = js.value("validation", 0.2);
        h.test = js.value("test", 0.2);
        c.split.mode = h;
      } else if (mode == "kfold") {
        c.split.mode = KFold{js.value("folds", std::size_t{10})};
        const auto sel = js.value("k_selection", std::string("pooled"));
        if (sel == "pooled")
          c.k_selection = KSelection::Pooled;
        else if (sel == "nested")
          c.k_selection = KSelection::Nested;
        else
          throw ContractError("config: unknown k_selection '" + sel + "'");
      } else {
        throw ContractError("config: unknown split mode '" + mode + "'");
      }
      c.split.seed = js.value("seed", std::uint64_t{0});
      c.split.stratified = js.value("stratified", false);
    }
    if (j.contains("k") && !j.at("k").is_null()) c.k = j.at("k").get<std::size_t>();
    if (j.contains("k_grid")) c.k_grid = j.at("k_grid").get<std::vector<std::size_t>>();
    c.cache_dir = detail::resolve(base_dir, j.value("cache_dir", std::string("cache")));
    c.out_dir = detail::resolve(base_dir, j.value("out_dir", std::string("out")));
    c.threads = j.value("threads", 0u);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
  c.split.validate();
  if (!(c.p >= 1.0)) throw ContractError("config: p must be >= 1");
  if (!(c.maxscale_safety >= 1.0)) throw ContractError("config: maxscale safety must be >= 1");
  if (c.k && *c.k == 0) throw ContractError("config: k must be positive");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ContractError("config '" + path + "': " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

// Every knob that can change a result; paths, cache/out dirs and thread count
// are excluded so the hash is stable across machines and pool sizes.
inline nlohmann::json result_relevant_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["delimiter"] = std::string(1, c.parse.delimiter);
  j["header"] = c.parse.header;
  j["symmetry"] = c.symmetry == SymmetryMode::Default ? "default" : c.symmetry == SymmetryMode::Zero ? "zero" : "explicit";
  j["symmetry_components"] = c.symmetry_components;
  j["standardization"] = c.fit_scope == FitScope::FullDataset ? "full_dataset" : "train_only";
  j["maxscale_safety"] = c.maxscale_safety;
  j["maxscale"] = c.maxscale ? nlohmann::json(*c.maxscale) : nlohmann::json(nullptr);
  j["p"] = c.p;
  if (const auto* h = std::get_if<HoldOut>(&c.split.mode)) {
    j["split"] = {{"mode", "holdout"}, {"train", h->train}, {"validation", h->validation}, {"test", h->test}};
  } else {
    j["split"] = {{"mode", "kfold"},
                  {"folds", std::get<KFold>(c.split.mode).folds},
                  {"k_selection", c.k_selection == KSelection::Pooled ? "pooled" : "nested"}};
  }
  j["split"]["seed"] = c.split.seed;
  j["split"]["stratified"] = c.split.stratified;
  j["k"] = c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr);
  j["k_grid"] = c.k_grid;
  j["version"] = kLibraryVersion;
  return j;
}

struct Dataset {
  RawDataset raw;
  FeatureMatrix encoded;
  std::vector<Label> labels;
  std::string data_hash;
};

// A standardization fit: the rows it was fit on, and a name used for caches.
struct FeatureVariant {
  std::string name;
  std::vector<std::size_t> fit_rows;
};

struct DiagramStage {
  std::vector<PersistenceDiagram> diagrams;
  double maxscale = 0.0;
};

// Counters used to verify cache behaviour.
struct PipelineStats {
  std::size_t diagram_sets_computed = 0;
  std::size_t distance_matrices_computed = 0;
  std::size_t cache_hits = 0;
};

class Pipeline {
 public:
  Pipeline(ExperimentConfig config, std::ostream& log) : cfg_(std::move(config)), log_(log) {}

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const PipelineStats& stats() const noexcept { return stats_; }
  const std::string& stage() const noexcept { return stage_; }

  const Dataset& dataset() {
    if (dataset_) return *dataset_;
    Timer t(*this, "ingest");
    Dataset d;
    const auto text = read_file(cfg_.data_path);
    d.data_hash = fnv1a_hex(text);
    schema_ = load_schema(cfg_.schema_path);
    d.raw = parse_dataset(std::string_view(text), schema_, cfg_.parse);
    log_ << "[ingest] rows: " << d.raw.report.total_rows << " total, " << d.raw.report.retained_rows << " retained, "
         << d.raw.report.dropped_rows << " dropped\n";
    stage_ = "encode";
    d.encoded = one_hot_encode(d.raw);
    d.labels = d.raw.labels();
    dataset_ = std::move(d);
    return *dataset_;
  }

  const std::vector<FeatureVariant>& variants() {
    if (!variants_.empty()) return variants_;
    const auto& d = dataset();
    if (cfg_.fit_scope == FitScope::FullDataset) {
      std::vector<std::size_t> all(d.labels.size());
      std::iota(all.begin(), all.end(), 0);
      variants_.push_back({"full", std::move(all)});
    } else if (!cfg_.is_kfold()) {
      variants_.push_back({"train", holdout_split(d.labels, cfg_.split).train});
    } else {
      const auto folds = std::get<KFold>(cfg_.split.mode).folds;
      const auto fold_of = kfold_assignment(d.labels, folds, cfg_.split.seed, cfg_.split.stratified);
      for (std::size_t f = 0; f < folds; ++f) {
        FeatureVariant v{"fold" + std::to_string(f), {}};
        for (std::size_t i = 0; i < fold_of.size(); ++i)
          if (fold_of[i] != f) v.fit_rows.push_back(i);
        variants_.push_back(std::move(v));
      }
    }
    return variants_;
  }

  SymmetryVector symmetry_vector(std::size_t m) const {
    switch (cfg_.symmetry) {
      case SymmetryMode::Default: return default_symmetry_vector(m);
      case SymmetryMode::Zero: return SymmetryVector{std::vector<double>(m, 0.0)};
      case SymmetryMode::Explicit:
        if (cfg_.symmetry_components.size() != m)
          throw ContractError("explicit symmetry vector has length " + std::to_string(cfg_.symmetry_components.size()) +
                              ", encoded width is " + std::to_string(m));
        return SymmetryVector{cfg_.symmetry_components};
    }
    return {};
  }

  // Symmetry-broken feature rows for one standardization fit.
  FeatureMatrix features(const FeatureVariant& v) {
    const auto& d = dataset();
    stage_ = "standardize";
    const auto params = fit_standardizer(d.encoded, cfg_.fit_scope, v.fit_rows);
    auto standardized = standardize(d.encoded, params);
    stage_ = "symmetry-break";
    return symmetry_break(std::move(standardized), symmetry_vector(d.encoded.cols()));
  }

  std::string diagrams_key(const FeatureVariant& v) {
    const auto& d = dataset();
    nlohmann::json j = result_relevant_json(cfg_);
    for (const char* k : {"p", "split", "k", "k_grid"}) j.erase(k);
    j["data_hash"] = d.data_hash;
    j["schema"] = schema_to_json(schema_);
    j["variant"] = v.name;
    j["fit_rows"] = v.fit_rows;
    return fnv1a_hex(j.dump());
  }

  std::string distances_key(const FeatureVariant& v) {
    return fnv1a_hex(diagrams_key(v) + "|p=" + format_real(cfg_.p));
  }

  const DiagramStage& diagrams(const FeatureVariant& v) {
    if (auto it = diagram_stages_.find(v.name); it != diagram_stages_.end()) return it->second;
    const auto& d = dataset();
    const auto key = diagrams_key(v);
    const auto csv = cache_path("diagrams-" + v.name + ".csv");
    const auto man = cache_path("diagrams-" + v.name + ".manifest");

    if (auto m = read_manifest_if_fresh(man, key, "diagrams-" + v.name)) {
      Timer t(*this, "diagrams (cache)");
      std::ifstream in(csv, std::ios::binary);
      if (in) {
        DiagramStage st;
        st.maxscale = *parse_real(*m->get("maxscale"));
        st.diagrams = read_diagrams(in, d.labels.size(), st.maxscale);
        ++stats_.cache_hits;
        return diagram_stages_[v.name] = std::move(st);
      }
    }

    const auto fm = features(v);
    DiagramStage st;
    {
      Timer t(*this, "point clouds");
      std::vector<PairwiseDistances> dist(fm.rows());
      parallel_for(fm.rows(), cfg_.worker_count(),
                   [&](std::size_t i) { dist[i] = pairwise_distances(build_point_cloud(fm.row(i), i)); });
      st.maxscale = cfg_.maxscale ? *cfg_.maxscale
                                  : choose_maxscale(std::span<const PairwiseDistances>(dist), cfg_.maxscale_safety);
      log_ << "[diagrams] variant " << v.name << ": maxscale " << format_real(st.maxscale) << '\n';
      stage_ = "diagrams";
      Timer t2(*this, "diagrams");
      st.diagrams.resize(fm.rows());
      parallel_for(fm.rows(), cfg_.worker_count(),
                   [&](std::size_t i) { st.diagrams[i] = rips_dim0_diagram(dist[i], st.maxscale); });
    }
    ++stats_.diagram_sets_computed;

    std::ostringstream body;
    write_diagrams(body, st.diagrams);
    Manifest m;
    m.set("kind", std::string("diagrams"));
    m.set("config_hash", key);
    m.set("maxscale", st.maxscale);
    m.set("maxscale_safety", cfg_.maxscale_safety);
    m.set("rows", st.diagrams.size());
    m.set("dimension", std::size_t{0});
    m.set("version", std::string(kLibraryVersion));
    write_text_file(csv, body.str());
    write_manifest(man, m);
    return diagram_stages_[v.name] = std::move(st);
  }

  const DistanceMatrix& distances(const FeatureVariant& v) {
    if (auto it = matrices_.find(v.name); it != matrices_.end()) return it->second;
    const auto key = distances_key(v);
    const auto csv = cache_path("distances-" + v.name + ".csv");
    const auto man = cache_path("distances-" + v.name + ".manifest");

    if (read_manifest_if_fresh(man, key, "distances-" + v.name)) {
      Timer t(*this, "distances (cache)");
      std::ifstream in(csv, std::ios::binary);
      if (in) {
        auto mat = read_matrix(in);
        if (mat.size() == dataset().labels.size()) {
          ++stats_.cache_hits;
          return matrices_[v.name] = std::move(mat);
        }
        log_ << "[cache] distances-" << v.name << ": wrong size, recomputing\n";
      }
    }

    const auto& st = diagrams(v);
    stage_ = "distances";
    DistanceMatrix mat;
    {
      Timer t(*this, "distances");
      mat = distance_matrix(st.diagrams, cfg_.p, cfg_.worker_count());
    }
    ++stats_.distance_matrices_computed;
    std::ostringstream body;
    write_matrix(body, mat);
    Manifest m;
    m.set("kind", std::string("distances"));
    m.set("config_hash", key);
    m.set("p", cfg_.p);
    m.set("maxscale", st.maxscale);
    m.set("rows", mat.size());
    m.set("version", std::string(kLibraryVersion));
    write_text_file(csv, body.str());
    write_manifest(man, m);
    return matrices_[v.name] = std::move(mat);
  }

  // ---- subcommands ------------------------------------------------------------

  void run_diagrams() {
    for (const auto& v : variants()) {
      const auto& st = diagrams(v);
      std::ostringstream body;
      write_diagrams(body, st.diagrams);
      write_text_file(out_path("diagrams-" + v.name + ".csv"), body.str());
    }
    write_run_manifest("diagrams", {});
  }

  void run_distances() {
    for (const auto& v : variants()) {
      std::ostringstream body;
      write_matrix(body, distances(v));
      write_text_file(out_path("distances-" + v.name + ".csv"), body.str());
    }
    write_run_manifest("distances", {});
  }

  void run_classify() {
    const auto& d = dataset();
    const auto& vars = variants();
    std::ostringstream table, kv, preds;
    Manifest extra;

    if (!cfg_.is_kfold()) {
      const auto& mat = distances(vars.front());
      stage_ = "classify";
      Timer t(*this, "classify");
      std::vector<std::size_t> grid = cfg_.k ? std::vector<std::size_t>{*cfg_.k} : cfg_.k_grid;
      const auto r = evaluate_split(mat, d.labels, cfg_.split, grid);
      table << "hold-out split: train " << r.split.train.size() << ", validation " << r.split.validation.size()
            << ", test " << r.split.test.size() << "\n\nvalidation:\n";
      write_validation_table(table, r.validation);
      table << "\nchosen k = " << r.chosen_k << "\n\ntest:\n";
      write_report_table(table, r.test);
      kv << "mode=holdout\n"
         << "train_size=" << r.split.train.size() << "\nvalidation_size=" << r.split.validation.size()
         << "\ntest_size=" << r.split.test.size() << "\nchosen_k=" << r.chosen_k << '\n';
      write_validation_kv(kv, r.validation);
      write_report_kv(kv, r.test);
      write_predictions(preds, r.test.predictions, "partition");
      extra.set("chosen_k", r.chosen_k);
    } else {
      const auto folds = std::get<KFold>(cfg_.split.mode).folds;
      const auto fold_of = kfold_assignment(d.labels, folds, cfg_.split.seed, cfg_.split.stratified);
      // Make sure every matrix exists before timing the classification.
      for (const auto& v : vars) distances(v);
      stage_ = "classify";
      Timer t(*this, "classify");
      auto matrix_for_fold = [&](std::size_t f) -> const DistanceMatrix& {
        return distances(vars.size() == 1 ? vars.front() : vars[f]);
      };
      KFoldSelection sel;
      if (cfg_.k) {
        sel.report = evaluate_kfold_with(d.labels, fold_of, folds, *cfg_.k, matrix_for_fold);
        sel.chosen_k = *cfg_.k;
      } else {
        sel = select_k_kfold_with(d.labels, fold_of, folds, cfg_.k_grid, cfg_.k_selection, matrix_for_fold);
      }
      sel.report.seed = cfg_.split.seed;
      table << folds << "-fold cross-validation\n";
      if (!sel.pooled_scores.empty()) {
        table << "\npooled scores:\n";
        write_validation_table(table, sel.pooled_scores);
      }
      table << "\nk = " << sel.chosen_k << "\n\n";
      write_report_table(table, sel.report);
      kv << "mode=kfold\nfolds=" << folds << "\nchosen_k=" << sel.chosen_k << '\n';
      write_validation_kv(kv, sel.pooled_scores);
      write_report_kv(kv, sel.report);
      write_predictions(preds, sel.report.predictions, "fold");
      extra.set("chosen_k", sel.chosen_k);
    }
    write_text_file(out_path("report.txt"), table.str());
    write_text_file(out_path("report.kv"), kv.str());
    write_text_file(out_path("predictions.csv"), preds.str());
    write_run_manifest("classify", extra);
    log_ << table.str();
  }

  // Cloud, diagram and k nearest training diagrams of one retained row.
  void run_inspect(std::size_t row, std::size_t k, std::ostream& os) {
    const auto& d = dataset();
    if (row >= d.labels.size())
      throw ContractError("row " + std::to_string(row) + " out of range (" + std::to_string(d.labels.size()) +
                          " retained rows)");
    const auto& vars = variants();
    std::vector<std::size_t> candidates;
    const FeatureVariant* var = &vars.front();
    if (!cfg_.is_kfold()) {
      const auto split = holdout_split(d.labels, cfg_.split);
      for (const auto i : split.train)
        if (i != row) candidates.push_back(i);
    } else {
      const auto folds = std::get<KFold>(cfg_.split.mode).folds;
      const auto fold_of = kfold_assignment(d.labels, folds, cfg_.split.seed, cfg_.split.stratified);
      for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold_of[row]) candidates.push_back(i);
      if (vars.size() > 1) var = &vars[fold_of[row]];
    }
    const auto fm = features(*var);
    const auto cloud = build_point_cloud(fm.row(row), row);
    const auto& st = diagrams(*var);
    const auto& mat = distances(*var);
    stage_ = "inspect";

    os << "row " << row << " (source row " << d.raw.rows[row].source_row << "), label " << to_int(d.labels[row])
       << ", variant " << var->name << "\n\npoint cloud (" << cloud.size() << " points in R^" << cloud.ambient_dim()
       << "):\n";
    write_point_cloud(os, cloud);
    os << "\ndiagram (dimension 0, maxscale " << format_real(st.maxscale) << "):\n";
    for (const auto& p : st.diagrams[row].pairs) os << format_real(p.birth) << ',' << format_real(p.death) << '\n';
    const auto nn = nearest_neighbors(row, candidates, mat, std::min(k, candidates.size()));
    os << "\nnearest " << nn.size() << " training diagrams:\n";
    for (const auto& n : nn) os << n.index << ',' << to_int(d.labels[n.index]) << ',' << format_real(n.distance) << '\n';
  }

 private:
  struct Timer {
    Timer(Pipeline& p, std::string name)
        : p_(p), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {
      p_.stage_ = name_;
    }
    ~Timer() {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      p_.log_ << "[time] " << name_ << ": " << dt.count() << " s\n";
    }
    Pipeline& p_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
  };

  std::filesystem::path cache_path(const std::string& name) const {
    return std::filesystem::path(cfg_.cache_dir) / name;
  }
  std::filesystem::path out_path(const std::string& name) const { return std::filesystem::path(cfg_.out_dir) / name; }

  static void write_manifest(const std::filesystem::path& path, const Manifest& m) {
    std::ostringstream os;
    m.write(os);
    write_text_file(path, os.str());
  }

  std::optional<Manifest> read_manifest_if_fresh(const std::filesystem::path& path, const std::string& key,
                                                 const std::string& what) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    Manifest m;
    try {
      m = Manifest::read(in);
    } catch (const Error&) {
      log_ << "[cache] " << what << ": unreadable manifest, recomputing\n";
      return std::nullopt;
    }
    if (m.get("config_hash") != key) {
      log_ << "[cache] " << what << ": stale (config hash mismatch), recomputing\n";
      return std::nullopt;
    }
    if (!m.get("maxscale") || !parse_real(*m.get("maxscale"))) return std::nullopt;
    return m;
  }

  void write_run_manifest(const std::string& command, const Manifest& extra) {
    const auto& d = dataset();
    Manifest m = extra;
    m.set("command", command);
    m.set("config_hash", fnv1a_hex(result_relevant_json(cfg_).dump()));
    m.set("data_hash", d.data_hash);
    m.set("seed", std::to_string(cfg_.split.seed));
    m.set("p", cfg_.p);
    m.set("maxscale_safety", cfg_.maxscale_safety);
    m.set("rows_total", d.raw.report.total_rows);
    m.set("rows_retained", d.raw.report.retained_rows);
    m.set("rows_dropped", d.raw.report.dropped_rows);
    m.set("encoded_width", d.encoded.cols());
    m.set("version", std::string(kLibraryVersion));
    for (const auto& v : variants()) {
      if (const auto it = diagram_stages_.find(v.name); it != diagram_stages_.end())
        m.set("maxscale." + v.name, it->second.maxscale);
    }
    write_manifest(out_path("manifest.txt"), m);
  }

  ExperimentConfig cfg_;
  std::ostream& log_;
  std::string stage_ = "start";
  SchemaSpec schema_;
  std::optional<Dataset> dataset_;
  std::vector<FeatureVariant> variants_;
  std::map<std::string, DiagramStage> diagram_stages_;
  std::map<std::string, DistanceMatrix> matrices_;
  PipelineStats stats_;
};

enum class Command { Diagrams, Distances, Classify, Inspect };

struct InspectOptions {
  std::size_t row = 0;
  std::size_t k = 5;
};

// Runs one subcommand; returns the process exit status. Library errors are
// reported as "error [stage]: message" on `log`.
inline int run_pipeline(const ExperimentConfig& config, Command cmd, std::ostream& log = std::cerr,
                        std::ostream& out = std::cout, const InspectOptions& inspect = {},
                        PipelineStats* stats = nullptr) {
  Pipeline p(config, log);
  int status = 0;
  try {
    switch (cmd) {
      case Command::Diagrams: p.run_diagrams(); break;
      case Command::Distances: p.run_distances(); break;
      case Command::Classify: p.run_classify(); break;
      case Command::Inspect: p.run_inspect(inspect.row, inspect.k, out); break;
    }
  } catch (const Error& e) {
    log << "error [" << p.stage() << "]: " << e.what() << '\n';
    status = 1;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error [" << p.stage() << "]: " << e.what() << '\n';
    status = 1;
  }
  if (stats) *stats = p.stats();
  return status;
}

}  // namespace topmix
