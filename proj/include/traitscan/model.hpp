// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "traitscan/feature_matrix.hpp"

namespace traitscan::model {

struct TrainConfig {
  int n_trees = 200;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  std::uint64_t rng_seed = 42;
  int k_folds = 10;
  double test_fraction = 0.20;
  double l2 = 1.0;        // leaf-weight regularizer
  int max_bins = 255;     // candidate thresholds per feature
  int workers = 1;

  /// Throws Error listing every invalid field.
  void validate() const;
};

// ---- partitioning ----------------------------------------------------------

struct Split {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> test;
};

/// Per class, round(n_class * test_fraction) rows go to the test side.
/// Throws Error when a class has fewer than 2 rows.
Split stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t rng_seed);

/// folds[i] = ascending row indices held out in fold i. Throws Error when
/// k < 2 or a class has fewer than k rows.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, int k,
                                                       std::uint64_t rng_seed);

/// Complement of folds[i] within [0, n).
std::vector<std::size_t> fold_complement(const std::vector<std::vector<std::size_t>>& folds,
                                         std::size_t i);

// ---- imputation ------------------------------------------------------------

/// Per-column fill values learned from a training partition: mode for binary
/// columns (ties to the smaller value), mean for numeric columns.
class Imputer {
 public:
  /// Throws Error naming the first column with no observed value.
  static Imputer fit(const FeatureMatrix& train);
  /// Rebuilds a fitted imputer from stored values.
  static Imputer from_values(std::vector<std::string> names, std::vector<double> fill);

  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<double>& fill_values() const { return fill_; }
  /// Throws Error when the column layout differs from the fitted one.
  FeatureMatrix apply(const FeatureMatrix& m) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> fill_;
};

// ---- ensemble --------------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // rows with x <= threshold go left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output (unscaled by learning rate)
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double output(std::span<const double> row) const;
};

struct TreeEnsemble {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> feature_names;
  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double initial_score = 0.0;
  std::vector<double> feature_importance;  // summed split gain per column
  std::vector<double> train_loss;          // mean log-loss after each round, starting with round 0

  double raw_score(std::span<const double> row) const;
};

/// Gradient boosting on logistic loss with Newton leaves. Requires an
/// imputed matrix with both labels present.
TreeEnsemble train_gbdt(const FeatureMatrix& train, const TrainConfig& cfg);

struct Predictions {
  std::vector<double> scores;  // sigmoid of the raw score
  std::vector<int> labels;     // score >= 0.5
};

/// Throws Error on column mismatch or missing cells.
Predictions predict(const TreeEnsemble& model, const FeatureMatrix& rows);

void save_model(const TreeEnsemble& model, const std::filesystem::path& path);
TreeEnsemble load_model(const std::filesystem::path& path);
std::string model_to_json(const TreeEnsemble& model);
TreeEnsemble model_from_json(const std::string& text);

// ---- metrics ---------------------------------------------------------------

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Positive class = 1. Throws Error on empty or unequal-length input.
Metrics evaluate(std::span<const int> predicted, std::span<const int> truth);
/// Metrics from pooled confusion counts.
Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

/// Predicts the training majority everywhere (ties to the positive class).
Metrics baseline_majority(std::span<const int> train_labels, std::span<const int> test_labels);
/// Uniform random labels; confusion counts pooled over `draws` draws.
Metrics baseline_random(std::span<const int> test_labels, std::uint64_t rng_seed, int draws = 200);

// ---- protocol --------------------------------------------------------------

struct HoldoutResult {
  TreeEnsemble model;
  Imputer imputer;
  Metrics metrics;
  Predictions predictions;
};

/// Impute (fit on train), train, and score the test rows.
HoldoutResult train_and_test(const FeatureMatrix& m, const Split& split, const TrainConfig& cfg);

struct CvResult {
  std::vector<Metrics> folds;
  Metrics pooled;     // from summed confusion counts
  double mean_f1 = 0.0;
};

/// Stratified k-fold CV over the given rows (all rows when empty).
CvResult cross_validate(const FeatureMatrix& m, const TrainConfig& cfg);

struct ImportanceRow {
  std::string feature;
  double importance = 0.0;  // normalized to sum 1 over all features
};

/// Descending by importance, ties by column order. Throws Error for a model
/// without trees or without any split.
std::vector<ImportanceRow> feature_report(const TreeEnsemble& model, std::size_t top_n = 0);

/// For each k in ks (1..cols when empty): retrain on the k top-ranked
/// columns (kept in their original order) with the same split and config.
std::vector<std::pair<std::size_t, double>> f1_growth_curve(const FeatureMatrix& m,
                                                            const std::vector<std::string>& ranking,
                                                            const Split& split, const TrainConfig& cfg,
                                                            std::vector<std::size_t> ks = {});

}  // namespace traitscan::model
