// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/rng.hpp"

namespace traitscan::model {
namespace {

std::vector<std::size_t> rows_of_class(std::span<const int> labels, int cls) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == cls) rows.push_back(i);
  return rows;
}

void shuffle_rows(std::vector<std::size_t>& rows, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(derive_seed(seed, stream));
  rng.shuffle(std::span<std::size_t>(rows));
}

// Stream ids keep the split and fold shuffles independent of each other.
constexpr std::uint64_t kSplitStream = 0x5011;
constexpr std::uint64_t kFoldStream = 0xF01D;

}  // namespace

void TrainConfig::validate() const {
  std::vector<std::string> problems;
  if (n_trees < 1) problems.push_back("n_trees must be >= 1");
  if (max_depth < 1) problems.push_back("max_depth must be >= 1");
  if (!(learning_rate > 0.0)) problems.push_back("learning_rate must be > 0");
  if (min_samples_leaf < 1) problems.push_back("min_samples_leaf must be >= 1");
  if (k_folds < 2) problems.push_back("k_folds must be >= 2");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) problems.push_back("test_fraction must be in (0,1)");
  if (!(l2 >= 0.0)) problems.push_back("l2 must be >= 0");
  if (max_bins < 1 || max_bins > 65534) problems.push_back("max_bins must be in [1, 65534]");
  if (workers < 1) problems.push_back("workers must be >= 1");
  if (problems.empty()) return;
  std::string msg = "invalid training config:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(msg);
}

Split stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t rng_seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("test_fraction must be in (0,1)");
  Split s;
  for (int cls : {0, 1}) {
    auto rows = rows_of_class(labels, cls);
    if (rows.size() < 2)
      throw Error("stratified_split: class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                  " rows, need at least 2");
    shuffle_rows(rows, rng_seed, kSplitStream + static_cast<std::uint64_t>(cls));
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(rows.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, rows.size() - 1);
    s.test.insert(s.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.insert(s.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, int k,
                                                       std::uint64_t rng_seed) {
  if (k < 2) throw Error("stratified_kfold: k must be >= 2");
  const auto uk = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> folds(uk);
  std::size_t offset = 0;
  for (int cls : {0, 1}) {
    auto rows = rows_of_class(labels, cls);
    if (rows.size() < uk)
      throw Error("stratified_kfold: class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                  " rows, fewer than k=" + std::to_string(k));
    shuffle_rows(rows, rng_seed, kFoldStream + static_cast<std::uint64_t>(cls));
    // The offset continues the round-robin so fold sizes differ by at most 1.
    for (std::size_t i = 0; i < rows.size(); ++i) folds[(offset + i) % uk].push_back(rows[i]);
    offset = (offset + rows.size()) % uk;
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> fold_complement(const std::vector<std::vector<std::size_t>>& folds, std::size_t i) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (f != i) out.insert(out.end(), folds[f].begin(), folds[f].end());
  std::sort(out.begin(), out.end());
  return out;
}

Imputer Imputer::fit(const FeatureMatrix& train) {
  Imputer imp;
  imp.names_ = train.column_names();
  imp.fill_.resize(train.cols());
  for (std::size_t c = 0; c < train.cols(); ++c) {
    std::size_t observed = 0;
    double sum = 0.0;
    std::map<double, std::size_t> counts;
    const bool binary = train.columns()[c].kind == ColumnKind::kBinary;
    for (std::size_t r = 0; r < train.rows(); ++r) {
      const double v = train.at(r, c);
      if (is_missing(v)) continue;
      ++observed;
      if (binary)
        ++counts[v];
      else
        sum += v;
    }
    if (observed == 0)
      throw Error("column " + imp.names_[c] + " has no observed values in the training partition");
    if (binary) {
      // std::map iterates ascending, so strict > keeps the smaller value on ties.
      std::size_t best = 0;
      for (const auto& [v, n] : counts)
        if (n > best) {
          best = n;
          imp.fill_[c] = v;
        }
    } else {
      imp.fill_[c] = sum / static_cast<double>(observed);
    }
  }
  return imp;
}

Imputer Imputer::from_values(std::vector<std::string> names, std::vector<double> fill) {
  if (names.size() != fill.size()) throw Error("imputer: names and fill values differ in length");
  for (const double v : fill)
    if (std::isnan(v)) throw Error("imputer: fill value is missing");
  Imputer imp;
  imp.names_ = std::move(names);
  imp.fill_ = std::move(fill);
  return imp;
}

FeatureMatrix Imputer::apply(const FeatureMatrix& m) const {
  if (m.column_names() != names_) throw Error("imputer: column layout differs from the fitted matrix");
  FeatureMatrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (is_missing(row[c])) row[c] = fill_[c];
  }
  return out;
}

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  const std::size_t n = tp + fp + tn + fn;
  m.accuracy = n ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
  return m;
}

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.empty()) throw Error("evaluate: empty input");
  if (predicted.size() != truth.size()) throw Error("evaluate: prediction and truth lengths differ");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1, t = truth[i] == 1;
    tp += p && t;
    fp += p && !t;
    tn += !p && !t;
    fn += !p && t;
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

Metrics baseline_majority(std::span<const int> train_labels, std::span<const int> test_labels) {
  const auto pos = std::count(train_labels.begin(), train_labels.end(), 1);
  const auto neg = static_cast<std::ptrdiff_t>(train_labels.size()) - pos;
  const int label = pos >= neg ? 1 : 0;
  const std::vector<int> predicted(test_labels.size(), label);
  return evaluate(predicted, test_labels);
}

Metrics baseline_random(std::span<const int> test_labels, std::uint64_t rng_seed, int draws) {
  if (test_labels.empty()) throw Error("baseline_random: empty input");
  if (draws < 1) throw Error("baseline_random: draws must be >= 1");
  Rng rng(rng_seed);
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (int d = 0; d < draws; ++d)
    for (const int t : test_labels) {
      const bool p = rng.bernoulli(0.5);
      tp += p && t == 1;
      fp += p && t != 1;
      tn += !p && t != 1;
      fn += !p && t == 1;
    }
  return metrics_from_counts(tp, fp, tn, fn);
}

HoldoutResult train_and_test(const FeatureMatrix& m, const Split& split, const TrainConfig& cfg) {
  const FeatureMatrix train = m.select_rows(split.train);
  const FeatureMatrix test = m.select_rows(split.test);
  HoldoutResult res{{}, Imputer::fit(train), {}, {}};
  res.model = train_gbdt(res.imputer.apply(train), cfg);
  res.predictions = predict(res.model, res.imputer.apply(test));
  res.metrics = evaluate(res.predictions.labels, test.labels());
  return res;
}

CvResult cross_validate(const FeatureMatrix& m, const TrainConfig& cfg) {
  const auto folds = stratified_kfold(m.labels(), cfg.k_folds, cfg.rng_seed);
  CvResult cv;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    const auto fold = train_and_test(m, Split{fold_complement(folds, i), folds[i]}, cfg).metrics;
    tp += fold.tp;
    fp += fold.fp;
    tn += fold.tn;
    fn += fold.fn;
    cv.mean_f1 += fold.f1;
    cv.folds.push_back(fold);
  }
  cv.mean_f1 /= static_cast<double>(folds.size());
  cv.pooled = metrics_from_counts(tp, fp, tn, fn);
  return cv;
}

std::vector<ImportanceRow> feature_report(const TreeEnsemble& model, std::size_t top_n) {
  if (model.trees.empty()) throw Error("feature_report: model has no trees");
  const double total = std::accumulate(model.feature_importance.begin(), model.feature_importance.end(), 0.0);
  if (!(total > 0.0)) throw Error("feature_report: model has no splits");
  std::vector<std::size_t> order(model.feature_importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.feature_importance[a] > model.feature_importance[b];
  });
  if (top_n == 0 || top_n > order.size()) top_n = order.size();
  std::vector<ImportanceRow> rows;
  for (std::size_t i = 0; i < top_n; ++i)
    rows.push_back({model.feature_names[order[i]], model.feature_importance[order[i]] / total});
  return rows;
}

std::vector<std::pair<std::size_t, double>> f1_growth_curve(const FeatureMatrix& m,
                                                            const std::vector<std::string>& ranking,
                                                            const Split& split, const TrainConfig& cfg,
                                                            std::vector<std::size_t> ks) {
  std::vector<std::size_t> ranked;
  std::vector<bool> seen(m.cols(), false);
  for (const auto& name : ranking) {
    const auto idx = m.column_index(name);
    if (!idx) throw Error("f1_growth_curve: ranking names unknown column " + name);
    if (seen[*idx]) throw Error("f1_growth_curve: ranking repeats column " + name);
    seen[*idx] = true;
    ranked.push_back(*idx);
  }
  if (ranked.size() != m.cols()) throw Error("f1_growth_curve: ranking must cover every column");
  if (ks.empty())
    for (std::size_t k = 1; k <= m.cols(); ++k) ks.push_back(k);
  for (const auto k : ks)
    if (k < 1 || k > m.cols()) throw Error("f1_growth_curve: k out of range: " + std::to_string(k));

  TrainConfig inner = cfg;
  inner.workers = 1;
  std::vector<std::pair<std::size_t, double>> curve(ks.size());
  parallel_for(ks.size(), cfg.workers, [&](std::size_t i) {
    std::vector<std::size_t> cols(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(ks[i]));
    std::sort(cols.begin(), cols.end());
    curve[i] = {ks[i], train_and_test(m.select_columns(cols), split, inner).metrics.f1};
  });
  return curve;
}

}  // namespace traitscan::model
