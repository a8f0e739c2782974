#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topmix/pipeline.hpp"

using namespace topmix;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("topmix_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

// Two mirror-image records over two numeric attributes.
ExperimentConfig mirror_fixture(const fs::path& dir) {
  write_text_file(dir / "mirror.data", "1,2,0\n2,1,1\n");
  SchemaSpec s;
  s.attributes = {{"a", AttributeKind::Numeric, {}}, {"b", AttributeKind::Numeric, {}}};
  s.target.name = "y";
  write_text_file(dir / "mirror.schema.json", schema_to_json(s).dump(2));
  ExperimentConfig c;
  c.data_path = (dir / "mirror.data").string();
  c.schema_path = (dir / "mirror.schema.json").string();
  c.cache_dir = (dir / "cache").string();
  c.out_dir = (dir / "out").string();
  return c;
}

ExperimentConfig cleveland(const fs::path& dir) {
  auto c = load_config(std::string(TOPMIX_DATA_DIR) + "/../configs/cleveland_holdout.json");
  c.cache_dir = (dir / "cache").string();
  c.out_dir = (dir / "out").string();
  return c;
}

}  // namespace

TEST(Config, ParsesShippedConfigs) {
  const auto h = load_config(std::string(TOPMIX_DATA_DIR) + "/../configs/cleveland_holdout.json");
  EXPECT_FALSE(h.is_kfold());
  EXPECT_EQ(h.split.seed, 1u);
  EXPECT_TRUE(fs::exists(h.data_path));
  const auto k = load_config(std::string(TOPMIX_DATA_DIR) + "/../configs/cleveland_kfold.json");
  EXPECT_TRUE(k.is_kfold());
  EXPECT_EQ(k.k, 16u);
}

TEST(Config, RejectsBadValues) {
  nlohmann::json j = {{"data", {{"path", "x"}}}, {"schema", "y"}, {"p", 0.5}};
  EXPECT_THROW(config_from_json(j), ContractError);
  j["p"] = 1;
  j["split"] = {{"mode", "bogus"}};
  EXPECT_THROW(config_from_json(j), ContractError);
  j["split"] = {{"mode", "kfold"}, {"folds", 1}};
  EXPECT_THROW(config_from_json(j), ContractError);
  EXPECT_THROW(config_from_json(nlohmann::json::object()), ContractError);
}

TEST(Pipeline, DiagramsEmitOnePairPerCloudPoint) {
  const auto dir = scratch("pairs");
  const auto cfg = mirror_fixture(dir);
  std::ostringstream log;
  ASSERT_EQ(run_pipeline(cfg, Command::Diagrams, log), 0) << log.str();
  std::istringstream in(slurp(dir / "out" / "diagrams-full.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "row,dimension,birth,death");
  std::vector<int> per_row(2, 0);
  while (std::getline(in, line)) ++per_row.at(std::stoi(line.substr(0, line.find(','))));
  EXPECT_EQ(per_row, (std::vector<int>{3, 3}));
}

TEST(Pipeline, ZeroVectorMakesMirrorRecordsIndistinguishable) {
  const auto dir = scratch("mirror");
  auto cfg = mirror_fixture(dir);
  std::ostringstream log;

  cfg.symmetry = SymmetryMode::Zero;
  Pipeline zero(cfg, log);
  const auto& v0 = zero.variants().front();
  const auto& z = zero.diagrams(v0).diagrams;
  EXPECT_EQ(z[0], z[1]);
  EXPECT_EQ(zero.distances(v0)(0, 1), 0.0);

  cfg.symmetry = SymmetryMode::Default;
  cfg.cache_dir = (dir / "cache2").string();
  Pipeline shifted(cfg, log);
  const auto& v1 = shifted.variants().front();
  const auto& s = shifted.diagrams(v1).diagrams;
  EXPECT_NE(s[0], s[1]);
  EXPECT_GT(shifted.distances(v1)(0, 1), 0.0);
}

TEST(Pipeline, ExplicitSymmetryVectorLengthIsChecked) {
  const auto dir = scratch("explicit");
  auto cfg = mirror_fixture(dir);
  cfg.symmetry = SymmetryMode::Explicit;
  cfg.symmetry_components = {1, 2, 3};
  std::ostringstream log;
  EXPECT_EQ(run_pipeline(cfg, Command::Diagrams, log), 1);
  EXPECT_NE(log.str().find("error [symmetry-break]"), std::string::npos) << log.str();
}

TEST(Pipeline, MissingDataFileReportsStage) {
  const auto dir = scratch("missing");
  auto cfg = mirror_fixture(dir);
  cfg.data_path = (dir / "nope.data").string();
  std::ostringstream log;
  EXPECT_EQ(run_pipeline(cfg, Command::Classify, log), 1);
  EXPECT_NE(log.str().find("error [ingest]"), std::string::npos) << log.str();
}

TEST(Pipeline, WarmCacheSkipsRecomputationAndMatchesColdRun) {
  const auto dir = scratch("cache");
  auto cfg = cleveland(dir);
  std::ostringstream log;
  PipelineStats cold, warm;
  ASSERT_EQ(run_pipeline(cfg, Command::Classify, log, std::cout, {}, &cold), 0) << log.str();
  const auto report_cold = slurp(dir / "out" / "report.kv");
  const auto preds_cold = slurp(dir / "out" / "predictions.csv");
  EXPECT_EQ(cold.diagram_sets_computed, 1u);
  EXPECT_EQ(cold.distance_matrices_computed, 1u);

  ASSERT_EQ(run_pipeline(cfg, Command::Classify, log, std::cout, {}, &warm), 0) << log.str();
  EXPECT_EQ(warm.diagram_sets_computed, 0u);
  EXPECT_EQ(warm.distance_matrices_computed, 0u);
  EXPECT_GE(warm.cache_hits, 1u);
  EXPECT_EQ(slurp(dir / "out" / "report.kv"), report_cold);
  EXPECT_EQ(slurp(dir / "out" / "predictions.csv"), preds_cold);

  // Changing the split seed reuses both caches.
  cfg.split.seed = 99;
  PipelineStats reseeded;
  ASSERT_EQ(run_pipeline(cfg, Command::Classify, log, std::cout, {}, &reseeded), 0) << log.str();
  EXPECT_EQ(reseeded.distance_matrices_computed, 0u);

  // A different p invalidates the distance cache only.
  cfg.p = 2.0;
  PipelineStats other;
  ASSERT_EQ(run_pipeline(cfg, Command::Distances, log, std::cout, {}, &other), 0) << log.str();
  EXPECT_EQ(other.diagram_sets_computed, 0u);
  EXPECT_EQ(other.distance_matrices_computed, 1u);
  EXPECT_NE(log.str().find("stale"), std::string::npos);
}

TEST(Pipeline, StaleManifestTriggersRecomputation) {
  const auto dir = scratch("stale");
  const auto cfg = mirror_fixture(dir);
  std::ostringstream log;
  ASSERT_EQ(run_pipeline(cfg, Command::Distances, log), 0);
  const auto man = dir / "cache" / "diagrams-full.manifest";
  auto text = slurp(man);
  const auto pos = text.find("config_hash=");
  ASSERT_NE(pos, std::string::npos);
  text[pos + 12] = text[pos + 12] == '0' ? '1' : '0';
  write_text_file(man, text);
  fs::remove(dir / "cache" / "distances-full.manifest");
  PipelineStats st;
  ASSERT_EQ(run_pipeline(cfg, Command::Distances, log, std::cout, {}, &st), 0);
  EXPECT_EQ(st.diagram_sets_computed, 1u);
  EXPECT_EQ(st.distance_matrices_computed, 1u);
}

TEST(Pipeline, DistancesAreByteIdenticalAcrossRunsAndThreadCounts) {
  const auto dir = scratch("bytes");
  auto cfg = cleveland(dir);
  std::ostringstream log;
  cfg.threads = 1;
  ASSERT_EQ(run_pipeline(cfg, Command::Distances, log), 0);
  const auto first = slurp(dir / "out" / "distances-full.csv");
  fs::remove_all(dir / "cache");
  cfg.threads = 4;
  ASSERT_EQ(run_pipeline(cfg, Command::Distances, log), 0);
  EXPECT_EQ(slurp(dir / "out" / "distances-full.csv"), first);
}

TEST(Pipeline, InspectListsNearestTrainingRows) {
  const auto dir = scratch("inspect");
  const auto cfg = cleveland(dir);
  std::ostringstream log, out;
  ASSERT_EQ(run_pipeline(cfg, Command::Inspect, log, out, {7, 5}), 0) << log.str();
  const auto text = out.str();
  EXPECT_NE(text.find("26 points in R^25"), std::string::npos);

  Pipeline p(cfg, log);
  const auto& d = p.distances(p.variants().front());
  const auto split = holdout_split(p.dataset().labels, cfg.split);
  std::vector<std::pair<double, std::size_t>> ranked;
  for (const auto i : split.train)
    if (i != 7) ranked.emplace_back(d(7, i), i);
  std::sort(ranked.begin(), ranked.end());
  const auto tail = text.substr(text.find("training diagrams:\n") + 19);
  std::istringstream in(tail);
  for (std::size_t r = 0; r < 5; ++r) {
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(std::stoul(line.substr(0, line.find(','))), ranked[r].second);
  }
  EXPECT_EQ(run_pipeline(cfg, Command::Inspect, log, out, {100000, 5}), 1);
}

TEST(Cli, ClassifyViaExecutable) {
  const auto dir = scratch("cli");
  const std::string cmd = std::string(TOPMIX_CLI) + " classify --config " + TOPMIX_DATA_DIR +
                          "/../configs/cleveland_holdout.json --cache-dir " + (dir / "cache").string() +
                          " --out-dir " + (dir / "out").string() + " --seed 3 > " + (dir / "log.txt").string() +
                          " 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0) << slurp(dir / "log.txt");
  const auto kv = slurp(dir / "out" / "report.kv");
  EXPECT_NE(kv.find("mode=holdout"), std::string::npos);
  EXPECT_NE(kv.find("test_size=59"), std::string::npos);
  EXPECT_NE(slurp(dir / "out" / "manifest.txt").find("seed=3"), std::string::npos);
}

TEST(Cli, BadFlagValueFails) {
  const std::string cmd = std::string(TOPMIX_CLI) + " distances --config " + TOPMIX_DATA_DIR +
                          "/../configs/cleveland_holdout.json --p 0.5 > /dev/null 2>&1";
  EXPECT_NE(std::system(cmd.c_str()), 0);
}
