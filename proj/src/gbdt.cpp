// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

// Gradient-boosted regression trees on logistic loss.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "traitscan/error.hpp"
#include "traitscan/model.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/simd/kernels.hpp"

namespace traitscan::model {
namespace {

constexpr double kMinGain = 1e-12;
constexpr int kMaxBacktracks = 20;
// Below this many row x feature cells a node is scanned on one thread.
constexpr std::size_t kParallelCells = 1u << 15;

double sigmoid(double f) { return 1.0 / (1.0 + std::exp(-f)); }

double log_loss(double f, int y) {
  const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
  return softplus - (y ? f : 0.0);
}

double mean_loss(std::span<const double> f, std::span<const int> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += log_loss(f[i], y[i]);
  return s / static_cast<double>(f.size());
}

// Candidate thresholds for one column: midpoints between distinct values,
// thinned to quantile positions when there are more than max_bins.
std::vector<double> thresholds_for(std::vector<double> values, int max_bins) {
  std::sort(values.begin(), values.end());
  auto cut_between = [](double a, double b) {
    const double mid = a + (b - a) / 2.0;
    return mid >= b ? a : mid;
  };
  std::vector<double> cuts;
  const std::size_t n = values.size();
  std::size_t distinct = n ? 1 : 0;
  for (std::size_t i = 1; i < n; ++i) distinct += values[i] != values[i - 1];
  if (distinct <= static_cast<std::size_t>(max_bins) + 1) {
    for (std::size_t i = 1; i < n; ++i)
      if (values[i] != values[i - 1]) cuts.push_back(cut_between(values[i - 1], values[i]));
    return cuts;
  }
  const std::size_t slots = static_cast<std::size_t>(max_bins) + 1;
  for (std::size_t j = 1; j < slots; ++j) {
    const std::size_t p = j * n / slots;
    if (p == 0 || values[p] == values[p - 1]) continue;
    const double c = cut_between(values[p - 1], values[p]);
    if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
  }
  return cuts;
}

struct BinnedData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> cuts;       // per column
  std::vector<std::vector<std::uint16_t>> bin;  // per column, per row

  std::size_t bins(std::size_t c) const { return cuts[c].size() + 1; }
};

BinnedData bin_matrix(const FeatureMatrix& m, int max_bins) {
  BinnedData d;
  d.rows = m.rows();
  d.cols = m.cols();
  d.cuts.resize(d.cols);
  d.bin.resize(d.cols);
  for (std::size_t c = 0; c < d.cols; ++c) {
    std::vector<double> col(d.rows);
    for (std::size_t r = 0; r < d.rows; ++r) col[r] = m.at(r, c);
    d.cuts[c] = thresholds_for(col, max_bins);
    auto& b = d.bin[c];
    b.resize(d.rows);
    const auto& cuts = d.cuts[c];
    for (std::size_t r = 0; r < d.rows; ++r)
      b[r] = static_cast<std::uint16_t>(std::lower_bound(cuts.begin(), cuts.end(), col[r]) - cuts.begin());
  }
  return d;
}

struct Candidate {
  double gain = 0.0;
  std::size_t cut = 0;
  bool valid = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const BinnedData& data, const TrainConfig& cfg, std::span<const double> grad,
              std::span<const double> hess, std::vector<double>& importance)
      : data_(data), cfg_(cfg), grad_(grad), hess_(hess), importance_(importance) {}

  Tree build() {
    std::vector<std::size_t> rows(data_.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  Candidate best_cut(std::size_t feature, const std::vector<std::size_t>& rows, double g_total,
                     double h_total) const {
    const std::size_t nb = data_.bins(feature);
    Candidate best;
    if (nb < 2) return best;
    std::vector<double> g(nb, 0.0), h(nb, 0.0);
    std::vector<std::size_t> n(nb, 0);
    const auto& bins = data_.bin[feature];
    for (const auto r : rows) {
      const auto b = bins[r];
      g[b] += grad_[r];
      h[b] += hess_[r];
      ++n[b];
    }
    // Prefix sums over cuts 0..nb-2 (left side = bins <= cut).
    std::vector<double> gl(nb - 1), hl(nb - 1), gains(nb - 1);
    std::vector<std::size_t> nl(nb - 1);
    double sg = 0.0, sh = 0.0;
    std::size_t sn = 0;
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      sg += g[b];
      sh += h[b];
      sn += n[b];
      gl[b] = sg;
      hl[b] = sh;
      nl[b] = sn;
    }
    simd::split_gains(gl, hl, g_total, h_total, cfg_.l2, gains);
    const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      if (nl[b] < min_leaf || rows.size() - nl[b] < min_leaf) continue;
      if (gains[b] > kMinGain && (!best.valid || gains[b] > best.gain)) best = {gains[b], b, true};
    }
    return best;
  }

  int grow(const std::vector<std::size_t>& rows, int depth) {
    double g_total = 0.0, h_total = 0.0;
    for (const auto r : rows) {
      g_total += grad_[r];
      h_total += hess_[r];
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    tree_.nodes[id].value = -g_total / (h_total + cfg_.l2);

    const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    if (depth >= cfg_.max_depth || rows.size() < 2 * min_leaf) return id;

    std::vector<Candidate> per_feature(data_.cols);
    const int workers = rows.size() * data_.cols >= kParallelCells ? cfg_.workers : 1;
    parallel_for(data_.cols, workers, [&](std::size_t f) {
      per_feature[f] = best_cut(f, rows, g_total, h_total);
    });
    // Lowest feature index, then lowest threshold, wins ties.
    std::size_t best_feature = 0;
    Candidate best;
    for (std::size_t f = 0; f < data_.cols; ++f) {
      const auto& c = per_feature[f];
      if (c.valid && (!best.valid || c.gain > best.gain)) {
        best = c;
        best_feature = f;
      }
    }
    if (!best.valid) return id;

    std::vector<std::size_t> left, right;
    const auto& bins = data_.bin[best_feature];
    for (const auto r : rows) (bins[r] <= best.cut ? left : right).push_back(r);
    importance_[best_feature] += best.gain;

    tree_.nodes[id].feature = static_cast<int>(best_feature);
    tree_.nodes[id].threshold = data_.cuts[best_feature][best.cut];
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const BinnedData& data_;
  const TrainConfig& cfg_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::vector<double>& importance_;
  Tree tree_;
};

void check_row_values(const FeatureMatrix& m, const char* what) {
  for (double v : m.values())
    if (!std::isfinite(v)) throw Error(std::string(what) + ": matrix has missing or non-finite cells; impute first");
}

}  // namespace

double Tree::output(std::span<const double> row) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    i = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

double TreeEnsemble::raw_score(std::span<const double> row) const {
  double s = 0.0;
  for (const auto& t : trees) s += t.output(row);
  return initial_score + learning_rate * s;
}

TreeEnsemble train_gbdt(const FeatureMatrix& train, const TrainConfig& cfg) {
  cfg.validate();
  if (train.rows() == 0) throw Error("train_gbdt: no training rows");
  check_row_values(train, "train_gbdt");
  const auto& y = train.labels();
  const std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (positives == 0 || positives == y.size()) throw Error("train_gbdt: training set has a single class");

  TreeEnsemble model;
  model.feature_names = train.column_names();
  model.learning_rate = cfg.learning_rate;
  const double base = static_cast<double>(positives) / static_cast<double>(y.size());
  model.initial_score = std::log(base / (1.0 - base));
  model.feature_importance.assign(train.cols(), 0.0);

  const BinnedData data = bin_matrix(train, cfg.max_bins);
  const std::size_t n = train.rows();
  std::vector<double> score(n, model.initial_score), grad(n), hess(n), next(n);
  double loss = mean_loss(score, y);
  model.train_loss.push_back(loss);

  for (int round = 0; round < cfg.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(score[i]);
      grad[i] = p - y[i];
      hess[i] = p * (1.0 - p);
    }
    std::vector<double> gains(train.cols(), 0.0);
    Tree tree = TreeBuilder(data, cfg, grad, hess, gains).build();
    if (tree.nodes.size() == 1) break;  // nothing left to split on

    // Shrink the step until the training loss does not go up.
    bool accepted = false;
    double next_loss = loss;
    for (int attempt = 0; attempt <= kMaxBacktracks; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) next[i] = score[i] + cfg.learning_rate * tree.output(train.row(i));
      next_loss = mean_loss(next, y);
      if (next_loss <= loss) {
        accepted = true;
        break;
      }
      for (auto& node : tree.nodes)
        if (node.feature < 0) node.value *= 0.5;
    }
    if (!accepted) break;
    score.swap(next);
    loss = next_loss;
    model.train_loss.push_back(loss);
    for (std::size_t f = 0; f < gains.size(); ++f) model.feature_importance[f] += gains[f];
    model.trees.push_back(std::move(tree));
  }
  return model;
}

Predictions predict(const TreeEnsemble& model, const FeatureMatrix& rows) {
  if (rows.cols() != model.feature_names.size() || rows.column_names() != model.feature_names)
    throw Error("predict: columns do not match the trained model (" + std::to_string(rows.cols()) + " vs " +
                std::to_string(model.feature_names.size()) + ")");
  check_row_values(rows, "predict");
  Predictions out;
  out.scores.reserve(rows.rows());
  out.labels.reserve(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double s = sigmoid(model.raw_score(rows.row(r)));
    out.scores.push_back(s);
    out.labels.push_back(s >= 0.5 ? 1 : 0);
  }
  return out;
}

std::string model_to_json(const TreeEnsemble& model) {
  nlohmann::json j;
  j["format"] = "traitscan-gbdt";
  j["format_version"] = TreeEnsemble::kFormatVersion;
  j["learning_rate"] = model.learning_rate;
  j["initial_score"] = model.initial_score;
  j["feature_names"] = model.feature_names;
  j["feature_importance"] = model.feature_importance;
  j["train_loss"] = model.train_loss;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& t : model.trees) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.feature < 0)
        nodes.push_back({{"leaf", n.value}});
      else
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                         {"right", n.right}, {"value", n.value}});
    }
    trees.push_back(std::move(nodes));
  }
  return j.dump(1);
}

TreeEnsemble model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "traitscan-gbdt") throw Error("not a traitscan model file");
    if (j.at("format_version").get<int>() != TreeEnsemble::kFormatVersion)
      throw Error("unsupported model format_version " + j.at("format_version").dump());
    TreeEnsemble m;
    m.learning_rate = j.at("learning_rate").get<double>();
    m.initial_score = j.at("initial_score").get<double>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.feature_importance = j.at("feature_importance").get<std::vector<double>>();
    m.train_loss = j.at("train_loss").get<std::vector<double>>();
    const int cols = static_cast<int>(m.feature_names.size());
    for (const auto& jt : j.at("trees")) {
      Tree t;
      for (const auto& jn : jt) {
        TreeNode n;
        if (jn.contains("leaf")) {
          n.value = jn.at("leaf").get<double>();
        } else {
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
          n.value = jn.at("value").get<double>();
        }
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) throw Error("empty tree in model file");
      for (const auto& n : t.nodes) {
        if (n.feature >= cols) throw Error("split feature index out of range in model file");
        if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size))
          throw Error("child index out of range in model file");
        if (!std::isfinite(n.value)) throw Error("non-finite leaf value in model file");
      }
      m.trees.push_back(std::move(t));
    }
    if (m.feature_importance.size() != m.feature_names.size())
      throw Error("importance length does not match feature count");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TreeEnsemble& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

TreeEnsemble load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace traitscan::model
