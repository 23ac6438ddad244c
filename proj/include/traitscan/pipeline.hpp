// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "traitscan/config.hpp"
#include "traitscan/corpus.hpp"
#include "traitscan/error.hpp"

namespace traitscan::pipeline {

/// A stage found an upstream artifact missing.
class MissingArtifact : public Error {
 public:
  MissingArtifact(const std::string& stage, const std::string& artifact, const std::string& producer);
};

/// Shared state for running stages against one output directory.
class Context {
 public:
  explicit Context(RunConfig config);

  const RunConfig& config() const { return config_; }
  const std::filesystem::path& out() const { return out_; }
  /// Loads corpus.dir once. Throws Error when unset or malformed.
  const Corpus& corpus();
  /// Hashes of the corpus files, keyed "corpus/<file>".
  const std::map<std::string, std::string>& corpus_hashes();

  /// Path of an artifact produced by an earlier stage; throws MissingArtifact.
  std::filesystem::path require(const std::string& stage, const std::string& artifact,
                                const std::string& producer) const;

  /// Records a stage in manifest.json with hashes of the listed files.
  void record(const std::string& stage, const std::map<std::string, std::string>& inputs,
              const std::vector<std::string>& outputs);

  /// Status lines collected while running (warnings, summaries).
  std::vector<std::string> log;

 private:
  RunConfig config_;
  std::filesystem::path out_;
  std::optional<Corpus> corpus_;
  std::map<std::string, std::string> corpus_hashes_;
};

void ingest_validate(Context& ctx);   // validation.json
void cohort_build(Context& ctx);      // grid.csv, cohort.json
void hashtags_top(Context& ctx);      // hashtags.csv
void cohort_control(Context& ctx);    // control.json
void features_extract(Context& ctx);  // features.csv, features.meta.json
void train(Context& ctx);             // model.json, split.json
void evaluate(Context& ctx);          // metrics.json, cv.json
void importance(Context& ctx);        // importance.csv, contrasts.csv
void curve(Context& ctx);             // curve.csv
void topics_graph(Context& ctx);      // edges.csv, nodes.csv (+ _control)
/// Writes a synthetic corpus and ground_truth.json into dir.
void synth_generate(Context& ctx, const std::filesystem::path& dir);

/// Every analysis stage in order, starting from ingest.
void run_all(Context& ctx);

}  // namespace traitscan::pipeline
