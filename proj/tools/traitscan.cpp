// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

// traitscan command-line driver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <cstdint>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "traitscan/config.hpp"
#include "traitscan/error.hpp"
#include "traitscan/pipeline.hpp"
#include "traitscan/manifest.hpp"

namespace {

namespace fs = std::filesystem;
using traitscan::RunConfig;
using traitscan::pipeline::Context;

constexpr int kExitError = 1;
constexpr int kExitMissingArtifact = 3;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> corpus;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.sets, "override one config key (key=value); repeatable");
  cmd->add_option("--corpus", f.corpus, "corpus directory (corpus.dir)");
  cmd->add_option("--workers", f.workers, "worker threads (workers)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "random seed (rng_seed)");
  cmd->add_option("--out", f.out, "output directory (out_dir)");
}

// File, then --set, then explicit flags.
// Parse and validation problems are reported together.
RunConfig resolve(const CommonFlags& f) {
  RunConfig cfg;
  std::vector<std::string> problems;
  auto collect = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const traitscan::Error& e) {
      std::istringstream in(e.what());
      std::string line;
      std::getline(in, line);  // heading
      while (std::getline(in, line)) problems.push_back(line);
    }
  };
  if (!f.config_path.empty()) collect([&] { cfg.apply_file(f.config_path); });
  std::string overrides;
  for (const auto& s : f.sets) overrides += s + "\n";
  collect([&] { cfg.apply_text(overrides, "--set"); });
  if (f.corpus) cfg.corpus_dir = *f.corpus;
  if (f.workers) cfg.workers = *f.workers;
  if (f.seed) cfg.rng_seed = *f.seed;
  if (f.out) cfg.out_dir = *f.out;
  collect([&] { cfg.validate(); });
  if (problems.empty()) return cfg;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n" + p;
  throw traitscan::Error(msg);
}

void print_log(const Context& ctx) {
  for (const auto& line : ctx.log) std::cerr << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traitscan: behavioral trait analysis of social media cohorts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(traitscan::kToolVersion));

  CommonFlags flags;
  std::function<void(Context&)> action;

  auto leaf = [&](CLI::App* parent, const char* name, const char* help, std::function<void(Context&)> fn) {
    auto* cmd = parent->add_subcommand(name, help);
    add_common(cmd, flags);
    cmd->callback([&action, fn] { action = fn; });
    return cmd;
  };

  auto* ingest = app.add_subcommand("ingest", "corpus ingestion")->require_subcommand(1);
  leaf(ingest, "validate", "load the corpus and report integrity issues (validation.json)",
       traitscan::pipeline::ingest_validate);

  auto* cohort = app.add_subcommand("cohort", "cohort selection")->require_subcommand(1);
  bool print_grid = false;
  auto* build = leaf(cohort, "build", "select the engaged cohort (cohort.json, grid.csv)", [&](Context& ctx) {
    traitscan::pipeline::cohort_build(ctx);
    if (print_grid) {
      std::ifstream f(ctx.out() / "grid.csv");
      std::cout << f.rdbuf();
    }
  });
  build->add_flag("--grid", print_grid, "also print the threshold grid");
  leaf(cohort, "control", "draw the matched control group (control.json)", traitscan::pipeline::cohort_control);

  auto* hashtags = app.add_subcommand("hashtags", "hashtag reports")->require_subcommand(1);
  leaf(hashtags, "top", "most used cohort hashtags (hashtags.csv)", traitscan::pipeline::hashtags_top);

  auto* features = app.add_subcommand("features", "feature extraction")->require_subcommand(1);
  leaf(features, "extract", "per-user feature matrix (features.csv)", traitscan::pipeline::features_extract);

  leaf(&app, "train", "fit the boosted-tree model (model.json, split.json)", traitscan::pipeline::train);
  leaf(&app, "evaluate", "holdout, baselines, CV and feature-set ablation (metrics.json)",
       traitscan::pipeline::evaluate);
  leaf(&app, "importance", "ranked split-gain importance (importance.csv, contrasts.csv)",
       traitscan::pipeline::importance);
  leaf(&app, "curve", "F1 versus number of top features (curve.csv)", traitscan::pipeline::curve);

  auto* topics = app.add_subcommand("topics", "hashtag co-occurrence")->require_subcommand(1);
  leaf(topics, "graph", "top-k co-occurrence subgraphs (edges.csv, nodes.csv)", traitscan::pipeline::topics_graph);

  auto* synth = app.add_subcommand("synth", "synthetic corpora")->require_subcommand(1);
  leaf(synth, "generate", "write a synthetic corpus and ground_truth.json into --out", [](Context& ctx) {
    traitscan::pipeline::synth_generate(ctx, ctx.out());
  });

  auto* pipeline = app.add_subcommand("pipeline", "end-to-end runs")->require_subcommand(1);
  bool with_synth = false;
  auto* run = leaf(pipeline, "run", "every stage from ingest to topics", [&](Context& ctx) {
    traitscan::pipeline::run_all(ctx);
  });
  run->add_flag("--synth", with_synth, "generate a synthetic corpus into <out>/corpus first");

  auto* config = app.add_subcommand("config", "configuration help")->require_subcommand(1);
  config->add_subcommand("keys", "list every key with its default")->callback([&] {
    for (const auto& [kv, help] : traitscan::config_keys()) std::printf("%-40s # %s\n", kv.c_str(), help.c_str());
    action = nullptr;
  });
  leaf(config, "show", "print the resolved configuration", [](Context& ctx) {
    std::cout << ctx.config().canonical();
  });

  CLI11_PARSE(app, argc, argv);
  if (!action) return 0;

  try {
    RunConfig cfg = resolve(flags);
    if (with_synth) {
      const fs::path dir = fs::path(cfg.out_dir) / "corpus";
      fs::create_directories(dir);
      Context gen(cfg);
      traitscan::pipeline::synth_generate(gen, dir);
      print_log(gen);
      cfg.corpus_dir = dir.string();
    }
    Context ctx(cfg);
    action(ctx);
    print_log(ctx);
  } catch (const traitscan::pipeline::MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingArtifact;
  } catch (const traitscan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
