#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "traitscan/cohort.hpp"
#include "traitscan/error.hpp"
#include "traitscan/features.hpp"
#include "traitscan/model.hpp"
#include "traitscan/synth.hpp"

using namespace traitscan;
using namespace traitscan::synth;

namespace {

SynthSpec small_spec() {
  SynthSpec s = SynthSpec::defaults();
  s.n_per_group = 60;
  s.tweets_min = 20;
  s.tweets_max = 40;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

cohort::UserSet truth_positive(const SynthOutput& out) {
  cohort::UserSet s;
  for (const auto& [id, label] : out.ground_truth)
    if (label == 1) s.insert(id);
  return s;
}

}  // namespace

TEST_CASE("synth output is identical across runs and worker counts") {
  const auto spec = small_spec();
  const auto a = generate_corpus(spec, 1);
  const auto b = generate_corpus(spec, 4);
  CHECK(a.corpus == b.corpus);
  CHECK(a.ground_truth == b.ground_truth);

  const auto base = std::filesystem::temp_directory_path() / "traitscan_synth_det";
  std::filesystem::remove_all(base);
  write_synth(a, base / "a");
  write_synth(b, base / "b");
  for (const char* f : {"users.jsonl", "tweets.jsonl", "likes.jsonl", "follows.jsonl", "seeds.json", "ground_truth.json"})
    CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
  const auto loaded = load_corpus(CorpusPaths::in_directory(base / "a")).corpus;
  CHECK(loaded == a.corpus);
  std::filesystem::remove_all(base);
}

TEST_CASE("different seeds give different corpora") {
  auto spec = small_spec();
  const auto a = generate_corpus(spec);
  spec.rng_seed = 7;
  CHECK_FALSE(generate_corpus(spec).corpus == a.corpus);
}

TEST_CASE("synth corpus is well formed") {
  const auto out = generate_corpus(small_spec());
  const auto& c = out.corpus;
  CHECK(out.ground_truth.size() == c.users.size());
  std::size_t pos = 0;
  for (const auto& [id, label] : out.ground_truth) pos += label;
  CHECK(pos == 60);
  const auto report = validate_corpus(c);
  CHECK(report.dangling_likes.empty());
  CHECK(report.dangling_follows.empty());
  CHECK(report.retweets_without_author.empty());
  CHECK(report.orphan_tweets.empty());
  for (const auto& [id, tl] : c.timelines) {
    const auto& u = c.users.at(id);
    for (std::size_t i = 0; i < tl.size(); ++i) {
      CHECK(tl[i].created_at >= u.created_at);
      CHECK(tl[i].created_at <= u.snapshot_at);
      if (i) CHECK(tl[i - 1].created_at <= tl[i].created_at);
    }
  }
}

TEST_CASE("tweet kind shares follow the profile") {
  SynthSpec spec = SynthSpec::defaults();
  spec.n_per_group = 40;
  const auto out = generate_corpus(spec);
  const auto cons = spec.effective_conspiracy();
  for (const int label : {0, 1}) {
    const GroupProfile& p = label ? cons : spec.control;
    std::size_t total = 0, replies = 0, retweets = 0, quotes = 0;
    for (const auto& [id, l] : out.ground_truth) {
      if (l != label || !out.corpus.timelines.count(id)) continue;
      if (out.corpus.users.at(id).predominant_language == "es") continue;
      for (const auto& t : out.corpus.timelines.at(id)) {
        ++total;
        replies += t.kind == TweetKind::kReply;
        retweets += t.kind == TweetKind::kRetweet;
        quotes += t.kind == TweetKind::kQuote;
      }
    }
    REQUIRE(total >= 1000);
    const double n = static_cast<double>(total);
    CHECK(std::abs(replies / n - p.reply_share) <= 0.03);
    CHECK(std::abs(retweets / n - p.retweet_share) <= 0.03);
    CHECK(std::abs(quotes / n - p.quote_share) <= 0.03);
  }
}

TEST_CASE("planted engagement is recovered by the cohort filter") {
  const auto out = generate_corpus(small_spec());
  const auto m = cohort::filter_cov(cohort::filter_follows_seed(cohort::build_like_matrix(out.corpus), out.corpus));
  const auto found = cohort::select_cohort(m, 25, 4);
  const auto truth = truth_positive(out);
  std::size_t hit = 0;
  for (const auto& u : found) hit += truth.count(u);
  CHECK(hit >= static_cast<std::size_t>(0.95 * truth.size()));
  CHECK(hit == found.size());
}

TEST_CASE("control candidates cover every conspiracist creation quarter") {
  const auto out = generate_corpus(small_spec());
  const auto truth = truth_positive(out);
  std::vector<std::string> tags = {"covid19", "ukraine", "pfizer", "news"};
  cohort::ControlConstraints cons;
  cons.excluded_users = cohort::seed_likers(out.corpus);
  cons.excluded_follow_targets = cohort::UserSet(out.corpus.seeds.begin(), out.corpus.seeds.end());
  const auto candidates = cohort::topic_candidates(out.corpus, tags);
  const auto result = cohort::build_control(out.corpus, truth, candidates, truth.size(), cons, 42);
  CHECK(result.users.size() == truth.size());
  for (const auto& u : result.users) CHECK(out.ground_truth.at(u) == 0);
}

TEST_CASE("identical profile makes groups indistinguishable in expectation") {
  const auto s = SynthSpec::identical();
  const auto c = s.effective_conspiracy();
  CHECK(c.reply_share == s.control.reply_share);
  CHECK(c.vocab_size == s.control.vocab_size);
  SynthSpec half = SynthSpec::defaults();
  half.separation = 0.5;
  CHECK(half.effective_conspiracy().reply_share ==
        doctest::Approx((half.conspiracy.reply_share + half.control.reply_share) / 2));
  half.separation = 0.0;
  CHECK(half.effective_conspiracy().negative_word_rate == half.control.negative_word_rate);
}

TEST_CASE("infeasible specs are rejected with every problem listed") {
  SynthSpec s = SynthSpec::defaults();
  s.conspiracy.reply_share = 0.7;
  s.conspiracy.retweet_share = 0.5;
  s.engagement.seeds_max = 40;
  try {
    s.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("conspiracy") != std::string::npos);
    CHECK(msg.find("seeds_max") != std::string::npos);
  }
  SynthSpec t = SynthSpec::defaults();
  t.n_per_group = 1;
  CHECK_THROWS_AS(generate_corpus(t), Error);
  t = SynthSpec::defaults();
  t.creation_to = "2030-01-01";
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("apply sets fields by dotted name") {
  SynthSpec s = SynthSpec::defaults();
  s.apply({{"conspiracy.reply_share", "0.3"}, {"n_per_group", "17"}, {"snapshot", "2023-01-01"}});
  CHECK(s.conspiracy.reply_share == 0.3);
  CHECK(s.n_per_group == 17);
  CHECK(s.snapshot == "2023-01-01");
  CHECK_THROWS_AS(s.apply({{"bogus", "1"}}), Error);
  CHECK_THROWS_AS(s.apply({{"n_per_group", "12x"}}), Error);
}

TEST_CASE("downstream F1 grows with the separation knob") {
  auto holdout_f1 = [](double separation) {
    SynthSpec spec = SynthSpec::defaults();
    spec.n_per_group = 150;
    spec.separation = separation;
    const auto out = generate_corpus(spec);
    std::vector<std::string> pos, neg;
    for (const auto& [id, l] : out.ground_truth) (l ? pos : neg).push_back(id);
    neg.resize(pos.size());
    features::ExtractOptions o;
    o.snapshot = parse_iso8601(spec.snapshot);
    const auto m = features::feature_matrix(out.corpus, features::label_cohorts(pos, neg), o).matrix;
    model::TrainConfig cfg;
    cfg.n_trees = 60;
    const auto split = model::stratified_split(m.labels(), 0.3, 42);
    return model::train_and_test(m, split, cfg).metrics.f1;
  };
  const double low = holdout_f1(0.0), mid = holdout_f1(0.5), high = holdout_f1(1.0);
  CHECK(low < mid);
  CHECK(mid < high);
}
