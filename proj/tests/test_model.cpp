#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "support/temp_dir.hpp"
#include "traitscan/error.hpp"
#include "traitscan/model.hpp"
#include "traitscan/rng.hpp"
#include "traitscan/simd/kernels.hpp"

using namespace traitscan;
using namespace traitscan::model;

namespace {

FeatureMatrix matrix_of(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                        std::vector<Column> cols = {}) {
  if (cols.empty())
    for (std::size_t c = 0; c < rows.front().size(); ++c) cols.push_back({"f" + std::to_string(c), ColumnKind::kNumeric});
  FeatureMatrix m(cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.add_row("u" + std::to_string(r), labels[r], rows[r]);
  return m;
}

std::vector<int> balanced_labels(std::size_t per_class) {
  std::vector<int> y;
  for (std::size_t i = 0; i < 2 * per_class; ++i) y.push_back(i % 2);
  return y;
}

// Column 0 separates the classes (label 1 iff x0 > 0.5), column 1 is noise,
// column 2 is weakly correlated.
FeatureMatrix toy(std::size_t n, std::uint64_t seed, double noise_flip = 0.0) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % 2);
    const double x0 = y ? 0.5 + 0.5 * rng.uniform() + 1e-3 : 0.5 * rng.uniform();
    const int seen = rng.bernoulli(noise_flip) ? 1 - y : y;
    rows.push_back({x0, rng.uniform(), seen + rng.normal(0.0, 2.0)});
    labels.push_back(y);
  }
  return matrix_of(rows, labels);
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.n_trees = 30;
  cfg.max_depth = 3;
  cfg.min_samples_leaf = 2;
  return cfg;
}

}  // namespace

TEST_CASE("train config validation lists every problem") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_trees = 0;
  cfg.test_fraction = 1.5;
  try {
    cfg.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("n_trees") != std::string::npos);
    CHECK(msg.find("test_fraction") != std::string::npos);
  }
}

TEST_CASE("imputation examples") {
  const double nan = kMissing;
  FeatureMatrix m = matrix_of({{1, 1}, {nan, 1}, {3, nan}}, {1, 0, 1},
                              {{"num", ColumnKind::kNumeric}, {"bin", ColumnKind::kBinary}});
  const auto imp = Imputer::fit(m);
  CHECK(imp.fill_values() == std::vector<double>{2.0, 1.0});
  const auto done = imp.apply(m);
  CHECK(done.at(1, 0) == 2.0);
  CHECK(done.at(2, 1) == 1.0);
  CHECK(done.missing_count() == 0);

  // Binary ties go to the smaller value.
  const auto tie = Imputer::fit(matrix_of({{0}, {1}}, {0, 1}, {{"b", ColumnKind::kBinary}}));
  CHECK(tie.fill_values()[0] == 0.0);

  CHECK_THROWS_AS(Imputer::fit(matrix_of({{nan}, {nan}}, {0, 1})), Error);
}

TEST_CASE("imputation uses training statistics only") {
  const double nan = kMissing;
  const auto m = matrix_of({{1}, {3}, {nan}, {100}}, {0, 1, 0, 1});
  const Split split{{0, 1}, {2, 3}};
  const auto imp = Imputer::fit(m.select_rows(split.train));
  const auto test = imp.apply(m.select_rows(split.test));
  CHECK(test.at(0, 0) == 2.0);  // pooled mean would be 104/3

  const auto other = Imputer::fit(matrix_of({{1, 2}}, {0}));
  CHECK_THROWS_AS(other.apply(m), Error);
}

TEST_CASE("stratified split sizes") {
  // 7394 per class with a 20% holdout gives 1479 + 1479 test rows.
  const auto big = balanced_labels(7394);
  const auto s = stratified_split(big, 0.2, 1);
  CHECK(s.test.size() == 2958);
  CHECK(s.train.size() == 11830);
  std::size_t test_pos = 0;
  for (auto r : s.test) test_pos += big[r];
  CHECK(test_pos == 1479);

  const auto small = balanced_labels(10);
  const auto a = stratified_split(small, 0.2, 9);
  CHECK(a.test.size() == 4);
  const auto b = stratified_split(small, 0.2, 9);
  CHECK(a.test == b.test);
  CHECK(a.train == b.train);
  const auto c = stratified_split(small, 0.2, 10);
  CHECK((c.test != a.test || c.train != a.train));

  std::vector<std::size_t> all(a.train);
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(20);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(all == expect);

  CHECK_THROWS_AS(stratified_split(std::vector<int>{1, 1, 1, 0}, 0.2, 1), Error);
}

TEST_CASE("stratified split keeps proportions on unbalanced labels") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> y(40 + rng.index(200));
    for (auto& v : y) v = rng.bernoulli(0.3);
    const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (pos < 2 || y.size() - pos < 2) continue;
    const double frac = 0.1 + 0.4 * rng.uniform();
    const auto s = stratified_split(y, frac, static_cast<std::uint64_t>(trial));
    std::size_t tp = 0;
    for (auto r : s.test) tp += y[r];
    CHECK(std::abs(static_cast<double>(tp) - frac * static_cast<double>(pos)) <= 1.0);
    CHECK(std::abs(static_cast<double>(s.test.size() - tp) - frac * static_cast<double>(y.size() - pos)) <= 1.0);
  }
}

TEST_CASE("stratified k-fold") {
  const auto y = balanced_labels(10);
  const auto folds = stratified_kfold(y, 10, 3);
  REQUIRE(folds.size() == 10);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    CHECK(f.size() == 2);
    CHECK(y[f[0]] + y[f[1]] == 1);
    for (auto r : f) CHECK(seen.insert(r).second);
  }
  CHECK(seen.size() == 20);
  CHECK(stratified_kfold(y, 10, 3) == folds);
  CHECK(fold_complement(folds, 0).size() == 18);

  std::vector<int> uneven(37, 0);
  for (std::size_t i = 0; i < 13; ++i) uneven[i * 2] = 1;
  const auto f5 = stratified_kfold(uneven, 5, 8);
  for (const auto& f : f5) {
    std::size_t pos = 0;
    for (auto r : f) pos += uneven[r];
    CHECK(std::abs(static_cast<double>(pos) - 13.0 / 5.0) <= 1.0);
    CHECK(std::abs(static_cast<double>(f.size() - pos) - 24.0 / 5.0) <= 1.0);
  }
  CHECK_THROWS_AS(stratified_kfold(std::vector<int>{0, 0, 0, 1}, 2, 1), Error);
  CHECK_THROWS_AS(stratified_kfold(y, 1, 1), Error);
}

TEST_CASE("threshold-separable data is fit within 10 trees") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i >= 25);
  }
  const auto m = matrix_of(rows, labels);
  TrainConfig cfg;
  cfg.n_trees = 10;
  const auto model = train_gbdt(m, cfg);
  const auto p = predict(model, m);
  CHECK(p.labels == labels);
  CHECK(model.trees.front().nodes[0].threshold == 24.5);
}

TEST_CASE("constant features predict the majority") {
  const auto m = matrix_of({{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}}, {1, 1, 1, 0, 0});
  const auto model = train_gbdt(m, TrainConfig{});
  CHECK(model.trees.empty());
  CHECK(predict(model, m).labels == std::vector<int>(5, 1));
  CHECK(model.initial_score == doctest::Approx(std::log(1.5)));
  CHECK_THROWS_AS(feature_report(model), Error);
  CHECK_THROWS_AS(train_gbdt(matrix_of({{1}, {2}}, {1, 1}), TrainConfig{}), Error);
  CHECK_THROWS_AS(train_gbdt(matrix_of({{kMissing}, {2}}, {1, 0}), TrainConfig{}), Error);
}

TEST_CASE("training loss never increases") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = toy(200, seed, 0.2);
    TrainConfig cfg;
    cfg.n_trees = 60;
    cfg.learning_rate = 0.9;  // aggressive steps exercise the backtracking
    cfg.min_samples_leaf = 1;
    const auto model = train_gbdt(m, cfg);
    REQUIRE(model.train_loss.size() == model.trees.size() + 1);
    for (std::size_t i = 1; i < model.train_loss.size(); ++i)
      CHECK(model.train_loss[i] <= model.train_loss[i - 1]);
  }
}

TEST_CASE("predict with an empty ensemble and a hand-traced model") {
  TreeEnsemble empty;
  empty.feature_names = {"a", "b"};
  empty.initial_score = 0.4;
  empty.feature_importance = {0, 0};
  const auto rows = matrix_of({{0, 0}, {5, 5}}, {0, 1}, {{"a"}, {"b"}});
  const auto p0 = predict(empty, rows);
  CHECK(p0.scores[0] == doctest::Approx(1.0 / (1.0 + std::exp(-0.4))));
  CHECK(p0.scores[1] == p0.scores[0]);

  // Tree 1 splits a at 1.0 (leaves -2 / +3); tree 2 splits b at 4.0 (leaves 1 / -1).
  TreeEnsemble m = empty;
  m.learning_rate = 0.5;
  m.initial_score = -0.25;
  m.trees.push_back({{{0, 1.0, 1, 2, 0}, {-1, 0, -1, -1, -2.0}, {-1, 0, -1, -1, 3.0}}});
  m.trees.push_back({{{1, 4.0, 1, 2, 0}, {-1, 0, -1, -1, 1.0}, {-1, 0, -1, -1, -1.0}}});
  const auto traced = matrix_of({{0.5, 4.0}, {2.0, 4.5}, {1.0, 9.0}}, {0, 1, 0}, {{"a"}, {"b"}});
  const auto p = predict(m, traced);
  // raw = -0.25 + 0.5 * (t1 + t2)
  CHECK(m.raw_score(traced.row(0)) == doctest::Approx(-0.25 + 0.5 * (-2.0 + 1.0)));
  CHECK(m.raw_score(traced.row(1)) == doctest::Approx(-0.25 + 0.5 * (3.0 - 1.0)));
  CHECK(m.raw_score(traced.row(2)) == doctest::Approx(-0.25 + 0.5 * (-2.0 - 1.0)));
  CHECK(p.labels == std::vector<int>{0, 1, 0});

  // Raising one leaf never lowers any score.
  TreeEnsemble bumped = m;
  bumped.trees[0].nodes[1].value += 0.7;
  const auto pb = predict(bumped, traced);
  for (std::size_t i = 0; i < 3; ++i) CHECK(pb.scores[i] >= p.scores[i]);

  CHECK_THROWS_AS(predict(m, matrix_of({{1}}, {0}, {{"a"}})), Error);
  CHECK_THROWS_AS(predict(m, matrix_of({{1, 2}}, {0}, {{"b"}, {"a"}})), Error);
}

TEST_CASE("metrics") {
  const std::vector<int> truth = {1, 1, 0, 0};
  const auto all_pos = evaluate(std::vector<int>{1, 1, 1, 1}, truth);
  CHECK(all_pos.precision == 0.5);
  CHECK(all_pos.recall == 1.0);
  CHECK(all_pos.f1 == doctest::Approx(2.0 / 3.0));
  const auto perfect = evaluate(truth, truth);
  CHECK((perfect.precision == 1.0 && perfect.recall == 1.0 && perfect.f1 == 1.0));
  const auto none = evaluate(std::vector<int>{0, 0, 0, 0}, truth);
  CHECK(none.f1 == 0.0);
  CHECK_THROWS_AS(evaluate(std::vector<int>{}, std::vector<int>{}), Error);
  CHECK_THROWS_AS(evaluate(std::vector<int>{1}, truth), Error);

  // A majority row with precision 0.53 at recall 1.00 has F1 0.69 under the
  // same harmonic mean.
  const double p = 0.53, r = 1.0;
  CHECK(2 * p * r / (p + r) == doctest::Approx(0.69).epsilon(0.005));
}

TEST_CASE("baselines") {
  const auto y = balanced_labels(500);
  const auto maj = baseline_majority(y, y);
  CHECK(maj.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(maj.recall == 1.0);
  const std::vector<int> mostly_neg = {0, 0, 0, 1};
  CHECK(baseline_majority(mostly_neg, y).f1 == 0.0);

  const auto rnd = baseline_random(balanced_labels(40), 7);
  CHECK(std::abs(rnd.f1 - 0.5) <= 0.05);
  CHECK(std::abs(rnd.precision - 0.5) <= 0.05);
  CHECK(baseline_random(balanced_labels(40), 7).f1 == rnd.f1);
}

TEST_CASE("importance singles out the separating feature") {
  const auto m = toy(300, 17);
  const auto model = train_gbdt(m, small_config());
  const auto report = feature_report(model);
  REQUIRE(report.size() == 3);
  CHECK(report[0].feature == "f0");
  CHECK(report[0].importance > 0.5);
  double total = 0.0;
  for (const auto& r : report) total += r.importance;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 1; i < report.size(); ++i) CHECK(report[i - 1].importance >= report[i].importance);
  CHECK(feature_report(model, 1).size() == 1);
}

TEST_CASE("growth curve reproduces the full model at k = all") {
  const auto m = toy(200, 23, 0.1);
  TrainConfig cfg = small_config();
  const auto split = stratified_split(m.labels(), 0.2, cfg.rng_seed);
  const auto full = train_and_test(m, split, cfg);
  std::vector<std::string> ranking;
  for (const auto& r : feature_report(full.model)) ranking.push_back(r.feature);
  const auto curve = f1_growth_curve(m, ranking, split, cfg);
  REQUIRE(curve.size() == 3);
  CHECK(curve.back().first == 3);
  CHECK(curve.back().second == full.metrics.f1);
  for (const auto& [k, f1] : curve) CHECK((f1 >= 0.0 && f1 <= 1.0));

  cfg.workers = 4;
  CHECK(f1_growth_curve(m, ranking, split, cfg) == curve);
  CHECK_THROWS_AS(f1_growth_curve(m, {"f0"}, split, cfg), Error);
}

TEST_CASE("training is deterministic across workers and kernels") {
  const auto m = toy(400, 31, 0.15);
  TrainConfig cfg;
  cfg.n_trees = 25;
  const auto base = model_to_json(train_gbdt(m, cfg));
  CHECK(model_to_json(train_gbdt(m, cfg)) == base);
  cfg.workers = 8;
  CHECK(model_to_json(train_gbdt(m, cfg)) == base);
  cfg.workers = 1;
  for (auto isa : {simd::Isa::kScalar, simd::Isa::kAvx2}) {
    if (!simd::isa_available(isa)) continue;
    simd::ScopedIsa pin(isa);
    CHECK(model_to_json(train_gbdt(m, cfg)) == base);
  }
}

TEST_CASE("model json round-trip") {
  const auto m = toy(150, 41, 0.1);
  const auto model = train_gbdt(m, small_config());
  TempDir dir;
  save_model(model, dir / "model.json");
  const auto back = load_model(dir / "model.json");
  CHECK(model_to_json(back) == model_to_json(model));
  CHECK(predict(back, m).scores == predict(model, m).scores);
  CHECK_THROWS_AS(model_from_json("{}"), Error);
  CHECK_THROWS_AS(model_from_json("not json"), Error);
  std::string future = model_to_json(model);
  const auto pos = future.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  future.replace(pos, 19, "\"format_version\": 9");
  CHECK_THROWS_AS(model_from_json(future), Error);
}
