// topmix: command-line front end for the diagram/k-NN pipeline.
//
//   topmix diagrams  --config cfg.json
//   topmix distances --config cfg.json --p 2
//   topmix classify  --config cfg.json --seed 7 --threads 4
//   topmix inspect   --config cfg.json --row 0 --k 5

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "topmix/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<double> p;
  std::optional<double> maxscale_safety;
  std::optional<std::string> cache_dir;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--k", o.k, "Fix k instead of searching the configured grid")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Split / fold seed");
  cmd->add_option("--p", o.p, "Wasserstein order (>= 1)");
  cmd->add_option("--maxscale-safety", o.maxscale_safety, "Filtration cap = safety x largest cloud distance");
  cmd->add_option("--cache-dir", o.cache_dir, "Diagram / distance cache directory");
  cmd->add_option("--out-dir", o.out_dir, "Report output directory");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

topmix::ExperimentConfig apply(const Overrides& o) {
  auto cfg = topmix::load_config(o.config);
  if (o.k) cfg.k = *o.k;
  if (o.seed) cfg.split.seed = *o.seed;
  if (o.p) cfg.p = *o.p;
  if (o.maxscale_safety) cfg.maxscale_safety = *o.maxscale_safety;
  if (o.cache_dir) cfg.cache_dir = *o.cache_dir;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.threads) cfg.threads = *o.threads;
  if (!(cfg.p >= 1.0)) throw topmix::ContractError("--p must be >= 1");
  if (!(cfg.maxscale_safety >= 1.0)) throw topmix::ContractError("--maxscale-safety must be >= 1");
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological k-NN classification of mixed numeric/categorical records"};
  app.require_subcommand(1);

  Overrides o;
  topmix::InspectOptions inspect;
  auto* diagrams = app.add_subcommand("diagrams", "Compute and emit per-row persistence diagrams");
  auto* distances = app.add_subcommand("distances", "Compute and emit the Wasserstein distance matrix");
  auto* classify = app.add_subcommand("classify", "Run the full classification experiment");
  auto* insp = app.add_subcommand("inspect", "Show one row's cloud, diagram and nearest training diagrams");
  for (auto* c : {diagrams, distances, classify, insp}) add_common(c, o);
  insp->add_option("--row", inspect.row, "Retained-row index")->required();
  insp->callback([&] {
    if (o.k) inspect.k = *o.k;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  topmix::ExperimentConfig cfg;
  try {
    cfg = apply(o);
  } catch (const topmix::Error& e) {
    std::cerr << "error [config]: " << e.what() << '\n';
    return 2;
  }

  topmix::Command cmd = topmix::Command::Classify;
  if (*diagrams) cmd = topmix::Command::Diagrams;
  if (*distances) cmd = topmix::Command::Distances;
  if (*insp) {
    cmd = topmix::Command::Inspect;
    // --k selects the neighbor count here, not the classifier k.
    cfg.k.reset();
  }
  return topmix::run_pipeline(cfg, cmd, std::cerr, std::cout, inspect);
}
