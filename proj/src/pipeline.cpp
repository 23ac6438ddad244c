// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "traitscan/cohort.hpp"
#include "traitscan/csv.hpp"
#include "traitscan/feature_matrix.hpp"
#include "traitscan/features.hpp"
#include "traitscan/lexicon.hpp"
#include "traitscan/manifest.hpp"
#include "traitscan/model.hpp"
#include "traitscan/statkit.hpp"
#include "traitscan/synth.hpp"
#include "traitscan/text.hpp"
#include "traitscan/topics.hpp"

namespace traitscan::pipeline {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCorpusFiles[] = {"users.jsonl", "tweets.jsonl", "likes.jsonl", "follows.jsonl", "seeds.json"};

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

json metrics_json(const model::Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy},
          {"tp", m.tp},               {"fp", m.fp},         {"tn", m.tn}, {"fn", m.fn}};
}

std::vector<std::string> user_list(const fs::path& path) {
  return read_json(path).at("users").get<std::vector<std::string>>();
}

std::map<std::string, std::string> hashes_of(const Context& ctx, const std::vector<std::string>& names) {
  std::map<std::string, std::string> out;
  for (const auto& n : names) out[n] = sha256_file(ctx.out() / n);
  return out;
}

// Features plus column kinds stored beside them.
FeatureMatrix load_features(const Context& ctx, const std::string& stage) {
  const auto meta = read_json(ctx.require(stage, "features.meta.json", "features extract"));
  std::vector<Column> kinds;
  for (const auto& c : meta.at("columns"))
    kinds.push_back({c.at("name").get<std::string>(), column_kind_from_string(c.at("kind").get<std::string>())});
  return read_features_csv(ctx.require(stage, "features.csv", "features extract"), &kinds);
}

struct StoredSplit {
  model::Split split;
  model::Imputer imputer;
};

StoredSplit load_split(const Context& ctx, const std::string& stage, const FeatureMatrix& m) {
  const auto j = read_json(ctx.require(stage, "split.json", "train"));
  std::map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < m.rows(); ++r) row_of[m.user_ids()[r]] = r;
  auto rows = [&](const char* key) {
    std::vector<std::size_t> out;
    for (const auto& id : j.at(key)) {
      const auto it = row_of.find(id.get<std::string>());
      if (it == row_of.end())
        throw Error("split.json names user " + id.get<std::string>() + " absent from features.csv; rerun train");
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  StoredSplit s{{rows("train"), rows("test")}, {}};
  const auto& imp = j.at("imputer");
  s.imputer = model::Imputer::from_values(imp.at("columns").get<std::vector<std::string>>(),
                                          imp.at("fill").get<std::vector<double>>());
  return s;
}

std::string group_name(const std::string& column, const std::set<std::string>& lexicon_cols) {
  const auto& cols = features::behavioral_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i].name == column) return features::to_string(features::group_of(i));
  return lexicon_cols.count(column) ? "lexicon" : "external";
}

std::map<std::string, std::string> column_groups(const Context& ctx, const std::string& stage) {
  const auto meta = read_json(ctx.require(stage, "features.meta.json", "features extract"));
  std::map<std::string, std::string> out;
  for (const auto& c : meta.at("columns")) out[c.at("name").get<std::string>()] = c.at("group").get<std::string>();
  return out;
}

std::vector<std::size_t> columns_in(const FeatureMatrix& m, const std::map<std::string, std::string>& groups,
                                    const std::set<std::string>& wanted) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (wanted.count(groups.at(m.columns()[c].name))) out.push_back(c);
  return out;
}

void write_graph(const topics::CoocGraph& g, const fs::path& edges, const fs::path& nodes) {
  topics::write_edges_csv(g, edges);
  topics::write_nodes_csv(g, nodes);
}

}  // namespace

MissingArtifact::MissingArtifact(const std::string& stage, const std::string& artifact, const std::string& producer)
    : Error("stage '" + stage + "' needs " + artifact + " which is missing; run '" + producer + "' first") {}

Context::Context(RunConfig config) : config_(std::move(config)), out_(config_.out_dir) {
  fs::create_directories(out_);
}

const Corpus& Context::corpus() {
  if (!corpus_) {
    if (config_.corpus_dir.empty()) throw Error("corpus.dir is not set");
    corpus_ = load_corpus(CorpusPaths::in_directory(config_.corpus_dir), config_.workers).corpus;
  }
  return *corpus_;
}

const std::map<std::string, std::string>& Context::corpus_hashes() {
  if (corpus_hashes_.empty()) {
    if (config_.corpus_dir.empty()) throw Error("corpus.dir is not set");
    for (const char* f : kCorpusFiles) {
      const fs::path p = fs::path(config_.corpus_dir) / f;
      if (fs::exists(p)) corpus_hashes_[std::string("corpus/") + f] = sha256_file(p);
    }
  }
  return corpus_hashes_;
}

fs::path Context::require(const std::string& stage, const std::string& artifact, const std::string& producer) const {
  const fs::path p = out_ / artifact;
  if (!fs::exists(p)) throw MissingArtifact(stage, artifact, producer);
  return p;
}

void Context::record(const std::string& stage, const std::map<std::string, std::string>& inputs,
                     const std::vector<std::string>& outputs) {
  const fs::path path = out_ / "manifest.json";
  Manifest m = Manifest::load(path);
  const std::string canonical = config_.canonical();
  const std::string sha = sha256_hex(canonical);
  m.configs[sha] = canonical;
  StageRecord r;
  r.config_sha256 = sha;
  r.rng_seed = config_.rng_seed;
  r.inputs = inputs;
  r.outputs = hashes_of(*this, outputs);
  m.stages[stage] = std::move(r);
  m.save(path);
}

void ingest_validate(Context& ctx) {
  const auto& c = ctx.corpus();
  const auto report = validate_corpus(c);
  std::size_t tweets = 0;
  for (const auto& [id, tl] : c.timelines) tweets += tl.size();
  constexpr std::size_t kShown = 100;
  auto head = [&](const auto& items, auto&& fmt) {
    json arr = json::array();
    for (std::size_t i = 0; i < items.size() && i < kShown; ++i) arr.push_back(fmt(items[i]));
    return json{{"count", items.size()}, {"examples", arr}};
  };
  auto id = [](const std::string& s) { return s; };
  json j;
  j["counts"] = {{"users", c.users.size()}, {"timelines", c.timelines.size()}, {"tweets", tweets},
                 {"likes", c.likes.size()}, {"follows", c.follows.size()},     {"seeds", c.seeds.size()}};
  j["dangling_likes"] = head(report.dangling_likes, [](const Like& l) { return l.user_id + " -> " + l.seed_id; });
  j["dangling_follows"] =
      head(report.dangling_follows, [](const Follow& f) { return f.follower_id + " -> " + f.followee_id; });
  j["retweets_without_author"] = head(report.retweets_without_author, id);
  j["empty_timelines"] = head(report.empty_timelines, id);
  j["orphan_tweets"] = head(report.orphan_tweets, id);
  j["clean"] = report.empty();
  write_json(ctx.out() / "validation.json", j);
  ctx.log.push_back("ingest: " + std::to_string(c.users.size()) + " users, " + std::to_string(tweets) + " tweets, " +
                    std::to_string(c.likes.size()) + " likes" + (report.empty() ? "" : " (issues in validation.json)"));
  ctx.record("ingest validate", ctx.corpus_hashes(), {"validation.json"});
}

void cohort_build(Context& ctx) {
  const auto& cfg = ctx.config();
  const auto& c = ctx.corpus();
  const auto likes = cohort::build_like_matrix(c, cfg.workers);
  const auto followed = cohort::filter_follows_seed(likes, c);
  const auto uniform = cohort::filter_cov(followed, cfg.max_cov);
  const auto grid = cohort::threshold_grid(uniform);

  cohort::Thresholds t;
  std::string selection = "fixed";
  if (cfg.l_min > 0 && cfg.s_min > 0) {
    t.l_min = cfg.l_min;
    t.s_min = cfg.s_min;
  } else {
    t = cohort::auto_thresholds(grid, static_cast<std::uint64_t>(cfg.target_size), cfg.auto_options());
    selection = "auto:" + cfg.auto_rule;
  }
  const auto users = cohort::select_cohort(uniform, t.l_min, t.s_min);

  {
    auto f = open_out(ctx.out() / "grid.csv");
    csv::write_row(f, {"l_min", "s_min", "users"});
    for (std::size_t li = 0; li < grid.l_axis.size(); ++li)
      for (std::size_t si = 0; si < grid.s_axis.size(); ++si)
        csv::write_row(f, {std::to_string(grid.l_axis[li]), std::to_string(grid.s_axis[si]),
                           std::to_string(grid.at(li, si))});
  }
  json j;
  j["rng_seed"] = cfg.rng_seed;
  j["selection"] = selection;
  j["l_min"] = t.l_min;
  j["s_min"] = t.s_min;
  j["max_cov"] = cfg.max_cov;
  j["target_size"] = cfg.target_size;
  j["funnel"] = {{"seed_likers", likes.rows()}, {"follow_seed", followed.rows()}, {"uniform_interest", uniform.rows()},
                 {"cohort", users.size()}};
  j["users"] = users;
  write_json(ctx.out() / "cohort.json", j);
  ctx.log.push_back("cohort: " + std::to_string(users.size()) + " users at l>=" + std::to_string(t.l_min) +
                    ", s>=" + std::to_string(t.s_min));
  ctx.record("cohort build", ctx.corpus_hashes(), {"grid.csv", "cohort.json"});
}

void hashtags_top(Context& ctx) {
  const std::string stage = "hashtags top";
  const auto cohort_path = ctx.require(stage, "cohort.json", "cohort build");
  const auto users = user_list(cohort_path);
  const auto top = cohort::top_hashtags(ctx.corpus(), cohort::UserSet(users.begin(), users.end()),
                                        static_cast<std::size_t>(ctx.config().top_hashtags));
  {
    auto f = open_out(ctx.out() / "hashtags.csv");
    csv::write_row(f, {"tag", "tweets"});
    for (const auto& [tag, n] : top) csv::write_row(f, {tag, std::to_string(n)});
  }
  auto inputs = ctx.corpus_hashes();
  inputs["cohort.json"] = sha256_file(cohort_path);
  ctx.record(stage, inputs, {"hashtags.csv"});
}

void cohort_control(Context& ctx) {
  const std::string stage = "cohort control";
  const auto& cfg = ctx.config();
  const auto cohort_path = ctx.require(stage, "cohort.json", "cohort build");
  const auto users = user_list(cohort_path);
  if (users.empty()) throw Error("stage '" + stage + "': the conspiracy cohort is empty; loosen the thresholds");
  const auto& c = ctx.corpus();
  const cohort::UserSet cons(users.begin(), users.end());

  std::vector<std::string> tags;
  for (const auto& [tag, n] : cohort::top_hashtags(c, cons, static_cast<std::size_t>(cfg.top_hashtags)))
    tags.push_back(tag);
  auto constraints = cfg.control_constraints();
  constraints.excluded_users = cohort::seed_likers(c);
  constraints.excluded_follow_targets = cohort::UserSet(c.seeds.begin(), c.seeds.end());
  const auto candidates = cohort::topic_candidates(c, tags);
  const std::size_t n = cfg.control_size > 0 ? static_cast<std::size_t>(cfg.control_size) : cons.size();
  const auto result = cohort::build_control(c, cons, candidates, n, constraints, cfg.rng_seed);

  json buckets = json::array();
  for (const auto& b : result.buckets)
    buckets.push_back({{"bucket", b.bucket},
                       {"wanted", b.wanted},
                       {"filled_in_bucket", b.filled_in_bucket},
                       {"filled_by_overflow", b.filled_by_overflow}});
  json j;
  j["rng_seed"] = cfg.rng_seed;
  j["hashtags"] = tags;
  j["language"] = constraints.target_language;
  j["creation_bucket"] = constraints.creation_bucket.to_string();
  j["eligible"] = result.eligible;
  j["buckets"] = buckets;
  j["users"] = result.users;
  write_json(ctx.out() / "control.json", j);
  ctx.log.push_back("control: " + std::to_string(result.users.size()) + " users from " +
                    std::to_string(result.eligible) + " eligible");
  auto inputs = ctx.corpus_hashes();
  inputs["cohort.json"] = sha256_file(cohort_path);
  ctx.record(stage, inputs, {"control.json"});
}

void features_extract(Context& ctx) {
  const std::string stage = "features extract";
  const auto& cfg = ctx.config();
  const auto cohort_path = ctx.require(stage, "cohort.json", "cohort build");
  const auto control_path = ctx.require(stage, "control.json", "cohort control");
  const auto& c = ctx.corpus();

  features::ExtractOptions opts;
  if (!cfg.snapshot.empty()) opts.snapshot = parse_iso8601(cfg.snapshot);
  opts.timeline_cap = static_cast<std::size_t>(cfg.timeline_cap);
  opts.workers = cfg.workers;
  auto result =
      features::feature_matrix(c, features::label_cohorts(user_list(cohort_path), user_list(control_path)), opts);
  FeatureMatrix m = std::move(result.matrix);

  auto inputs = ctx.corpus_hashes();
  inputs["cohort.json"] = sha256_file(cohort_path);
  inputs["control.json"] = sha256_file(control_path);

  std::vector<lexicon::Lexicon> lexicons;
  for (const auto& p : cfg.lexicon_paths()) {
    lexicons.push_back(lexicon::load_lexicon(p, lexicon::format_from_string(p.extension().string().substr(1))));
    inputs["lexicon/" + p.filename().string()] = sha256_file(p);
  }
  std::set<std::string> lexicon_cols;
  if (!lexicons.empty()) {
    lexicon::append_lexicon_columns(m, c, lexicons, opts.timeline_cap, cfg.workers);
    for (const auto& col : lexicon::lexicon_columns(lexicons)) lexicon_cols.insert(col.name);
  }
  if (!cfg.external_features.empty()) {
    m = lexicon::join_external_features(m, cfg.external_features, &result.warnings);
    inputs["external/" + fs::path(cfg.external_features).filename().string()] = sha256_file(cfg.external_features);
  }

  write_features_csv(m, ctx.out() / "features.csv");
  json cols = json::array();
  for (const auto& col : m.columns())
    cols.push_back({{"name", col.name}, {"kind", to_string(col.kind)}, {"group", group_name(col.name, lexicon_cols)}});
  std::size_t positives = 0;
  for (const int l : m.labels()) positives += l == 1;
  json meta;
  meta["columns"] = cols;
  meta["rows"] = m.rows();
  meta["positives"] = positives;
  meta["negatives"] = m.rows() - positives;
  meta["timeline_cap"] = cfg.timeline_cap;
  meta["tokenizer_version"] = text::kTokenizerVersion;
  meta["warnings"] = result.warnings;
  write_json(ctx.out() / "features.meta.json", meta);
  for (const auto& w : result.warnings) ctx.log.push_back("features: " + w);
  ctx.log.push_back("features: " + std::to_string(m.rows()) + " rows x " + std::to_string(m.cols()) + " columns");
  ctx.record(stage, inputs, {"features.csv", "features.meta.json"});
}

void train(Context& ctx) {
  const std::string stage = "train";
  const auto& cfg = ctx.config();
  const auto m = load_features(ctx, stage);
  const auto tc = cfg.train_config();
  tc.validate();
  const auto split = model::stratified_split(m.labels(), tc.test_fraction, tc.rng_seed);
  const auto r = model::train_and_test(m, split, tc);
  model::save_model(r.model, ctx.out() / "model.json");

  auto ids = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::string> out;
    for (const auto i : rows) out.push_back(m.user_ids()[i]);
    return out;
  };
  json j;
  j["rng_seed"] = tc.rng_seed;
  j["test_fraction"] = tc.test_fraction;
  j["train"] = ids(split.train);
  j["test"] = ids(split.test);
  j["imputer"] = {{"columns", r.imputer.column_names()}, {"fill", r.imputer.fill_values()}};
  write_json(ctx.out() / "split.json", j);
  ctx.log.push_back("train: " + std::to_string(r.model.trees.size()) + " trees on " + std::to_string(split.train.size()) +
                    " rows");
  ctx.record(stage, hashes_of(ctx, {"features.csv", "features.meta.json"}), {"model.json", "split.json"});
}

void evaluate(Context& ctx) {
  const std::string stage = "evaluate";
  const auto tc = ctx.config().train_config();
  const auto m = load_features(ctx, stage);
  const auto mdl = model::load_model(ctx.require(stage, "model.json", "train"));
  const auto stored = load_split(ctx, stage, m);
  const auto& split = stored.split;

  const auto test = stored.imputer.apply(m.select_rows(split.test));
  const auto pred = model::predict(mdl, test);
  const auto holdout = model::evaluate(pred.labels, test.labels());
  std::vector<int> train_labels;
  for (const auto i : split.train) train_labels.push_back(m.labels()[i]);
  const auto majority = model::baseline_majority(train_labels, test.labels());
  const auto random = model::baseline_random(test.labels(), tc.rng_seed);
  const auto cv = model::cross_validate(m, tc);

  // Holdout F1 per feature set, same split and config.
  const auto groups = column_groups(ctx, stage);
  std::set<std::string> present;
  for (const auto& [col, g] : groups) present.insert(g);
  std::vector<std::pair<std::string, std::set<std::string>>> sets = {
      {"credibility", {"credibility"}},
      {"initiative", {"initiative"}},
      {"adaptability", {"adaptability"}},
      {"behavioral", {"credibility", "initiative", "adaptability"}},
  };
  if (present.count("lexicon")) {
    sets.push_back({"lexicon", {"lexicon"}});
    sets.push_back({"behavioral+lexicon", {"credibility", "initiative", "adaptability", "lexicon"}});
  }
  if (present.count("external")) sets.push_back({"all", present});
  json feature_sets = json::object();
  for (const auto& [name, wanted] : sets) {
    const auto cols = columns_in(m, groups, wanted);
    if (cols.empty()) continue;
    const auto r = model::train_and_test(m.select_columns(cols), split, tc);
    feature_sets[name] = metrics_json(r.metrics);
    feature_sets[name]["n_features"] = cols.size();
  }

  json j;
  j["rng_seed"] = tc.rng_seed;
  j["n_train"] = split.train.size();
  j["n_test"] = split.test.size();
  j["holdout"] = metrics_json(holdout);
  j["baselines"] = {{"majority", metrics_json(majority)}, {"random", metrics_json(random)}};
  j["cross_validation"] = {{"k", tc.k_folds}, {"pooled", metrics_json(cv.pooled)}, {"mean_f1", cv.mean_f1}};
  j["feature_sets"] = feature_sets;
  write_json(ctx.out() / "metrics.json", j);

  json folds = json::array();
  for (const auto& f : cv.folds) folds.push_back(metrics_json(f));
  write_json(ctx.out() / "cv.json", {{"rng_seed", tc.rng_seed}, {"k", tc.k_folds}, {"folds", folds}});
  char buf[160];
  std::snprintf(buf, sizeof buf, "evaluate: holdout F1 %.3f (majority %.3f, random %.3f), %d-fold CV F1 %.3f",
                holdout.f1, majority.f1, random.f1, tc.k_folds, cv.pooled.f1);
  ctx.log.push_back(buf);
  ctx.record(stage, hashes_of(ctx, {"features.csv", "features.meta.json", "model.json", "split.json"}),
             {"metrics.json", "cv.json"});
}

void importance(Context& ctx) {
  const std::string stage = "importance";
  const auto& cfg = ctx.config();
  const auto mdl = model::load_model(ctx.require(stage, "model.json", "train"));
  const auto m = load_features(ctx, stage);
  const auto groups = column_groups(ctx, stage);
  const auto rows = model::feature_report(mdl, static_cast<std::size_t>(cfg.importance_top_n));
  {
    auto f = open_out(ctx.out() / "importance.csv");
    csv::write_row(f, {"rank", "feature", "group", "importance"});
    for (std::size_t i = 0; i < rows.size(); ++i)
      csv::write_row(f, {std::to_string(i + 1), rows[i].feature, groups.at(rows[i].feature),
                         csv::format_double(rows[i].importance)});
  }
  // Group summaries for the ranked features, missing cells left out.
  {
    auto f = open_out(ctx.out() / "contrasts.csv");
    csv::write_row(f, {"feature", "conspiracy_mean", "control_mean", "conspiracy_median", "control_median"});
    for (const auto& row : rows) {
      const auto col = *m.column_index(row.feature);
      std::vector<double> by_label[2];
      for (std::size_t r = 0; r < m.rows(); ++r)
        if (!is_missing(m.at(r, col))) by_label[m.labels()[r]].push_back(m.at(r, col));
      auto summary = [](const std::vector<double>& v) {
        return v.empty() ? statkit::DistParams{kMissing, kMissing, kMissing, kMissing, kMissing, kMissing, kMissing}
                         : statkit::dist_params(v);
      };
      const auto pos = summary(by_label[1]), neg = summary(by_label[0]);
      csv::write_row(f, {row.feature, csv::format_double(pos.mean), csv::format_double(neg.mean),
                         csv::format_double(pos.median), csv::format_double(neg.median)});
    }
  }
  ctx.record(stage, hashes_of(ctx, {"features.csv", "features.meta.json", "model.json"}),
             {"importance.csv", "contrasts.csv"});
}

void curve(Context& ctx) {
  const std::string stage = "curve";
  const auto tc = ctx.config().train_config();
  const auto m = load_features(ctx, stage);
  const auto mdl = model::load_model(ctx.require(stage, "model.json", "train"));
  const auto stored = load_split(ctx, stage, m);
  std::vector<std::string> ranking;
  for (const auto& row : model::feature_report(mdl)) ranking.push_back(row.feature);
  const auto points = model::f1_growth_curve(m, ranking, stored.split, tc, ctx.config().curve_sizes(m.cols()));
  {
    auto f = open_out(ctx.out() / "curve.csv");
    csv::write_row(f, {"k", "f1"});
    for (const auto& [k, f1] : points) csv::write_row(f, {std::to_string(k), csv::format_double(f1)});
  }
  ctx.record(stage, hashes_of(ctx, {"features.csv", "features.meta.json", "model.json", "split.json"}), {"curve.csv"});
}

void topics_graph(Context& ctx) {
  const std::string stage = "topics graph";
  const auto& cfg = ctx.config();
  const auto cohort_path = ctx.require(stage, "cohort.json", "cohort build");
  const auto k = static_cast<std::size_t>(cfg.topics_top_k);
  auto inputs = ctx.corpus_hashes();
  inputs["cohort.json"] = sha256_file(cohort_path);
  std::vector<std::string> outputs = {"edges.csv", "nodes.csv"};

  auto graph_for = [&](const fs::path& users_path) {
    const auto users = user_list(users_path);
    return topics::top_k_subgraph(
        topics::cooccurrence_graph(ctx.corpus(), std::set<std::string>(users.begin(), users.end()), cfg.workers), k);
  };
  write_graph(graph_for(cohort_path), ctx.out() / "edges.csv", ctx.out() / "nodes.csv");
  if (const auto control_path = ctx.out() / "control.json"; fs::exists(control_path)) {
    write_graph(graph_for(control_path), ctx.out() / "edges_control.csv", ctx.out() / "nodes_control.csv");
    inputs["control.json"] = sha256_file(control_path);
    outputs.push_back("edges_control.csv");
    outputs.push_back("nodes_control.csv");
  }
  ctx.record(stage, inputs, outputs);
}

void synth_generate(Context& ctx, const fs::path& dir) {
  const auto spec = ctx.config().synth_spec();
  const auto out = synth::generate_corpus(spec, ctx.config().workers);
  synth::write_synth(out, dir);
  std::vector<std::string> outputs;
  for (const char* f : kCorpusFiles) outputs.push_back(fs::relative(dir / f, ctx.out()).generic_string());
  outputs.push_back(fs::relative(dir / "ground_truth.json", ctx.out()).generic_string());
  ctx.log.push_back("synth: " + std::to_string(out.corpus.users.size()) + " profiles written to " + dir.string());
  ctx.record("synth generate", {}, outputs);
}

void run_all(Context& ctx) {
  ingest_validate(ctx);
  cohort_build(ctx);
  hashtags_top(ctx);
  cohort_control(ctx);
  features_extract(ctx);
  train(ctx);
  evaluate(ctx);
  importance(ctx);
  curve(ctx);
  topics_graph(ctx);
}

}  // namespace traitscan::pipeline
