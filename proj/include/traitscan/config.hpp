// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "traitscan/cohort.hpp"
#include "traitscan/model.hpp"
#include "traitscan/synth.hpp"

namespace traitscan {

/// Run settings. Loaded from a key=value file ('#' comments, blank lines
/// ignored); command-line flags and --set override individual keys.
struct RunConfig {
  std::string corpus_dir;
  std::string out_dir = "out";
  std::uint64_t rng_seed = 42;
  int workers = 1;

  // cohort: fixed thresholds when both are > 0, otherwise auto toward target_size
  int l_min = 25;
  int s_min = 4;
  double max_cov = 1.0;
  int target_size = 0;
  std::string auto_rule = "nearest";  // nearest | nearest_below
  int auto_min_likes = 0;
  int auto_min_sources = 0;
  int top_hashtags = 10;

  // control group
  std::string control_language = "en";
  std::string control_bucket = "quarter";
  bool control_allow_overflow = false;
  int control_size = 0;  // 0 = conspiracy cohort size

  // features
  int timeline_cap = 3200;
  std::string snapshot;  // ISO-8601; empty = each profile's own snapshot
  std::string lexicons;  // comma-separated paths; format from extension
  std::string external_features;

  model::TrainConfig train;
  std::string curve_ks = "1,2,3,5,10,20,50,all";
  int importance_top_n = 20;
  int topics_top_k = 30;

  std::map<std::string, std::string> synth;  // synth.<key> overrides

  /// Sets one key. Throws Error on unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);

  /// Applies every line; all problems are reported in a single Error.
  void apply_text(const std::string& text, const std::string& source = "config");
  void apply_file(const std::filesystem::path& path);

  /// Cross-field checks; throws Error listing every problem.
  void validate() const;

  /// Canonical key=value text, sorted by key. Leaves out workers (results do
  /// not depend on it) and the two directories (the corpus is identified by
  /// its file hashes instead).
  std::string canonical() const;

  std::vector<std::filesystem::path> lexicon_paths() const;
  /// Curve sizes; "all" maps to n_features. Sorted, unique, clamped.
  std::vector<std::size_t> curve_sizes(std::size_t n_features) const;
  cohort::AutoThresholdOptions auto_options() const;
  cohort::ControlConstraints control_constraints() const;
  synth::SynthSpec synth_spec() const;
  model::TrainConfig train_config() const;
};

/// Every recognised key with its default value and a one-line description.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace traitscan
