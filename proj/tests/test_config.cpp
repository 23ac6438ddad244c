#include <doctest.h>

#include <functional>
#include <string>

#include "traitscan/config.hpp"
#include "traitscan/error.hpp"

using namespace traitscan;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("config text sets typed fields") {
  RunConfig c;
  c.apply_text("# comment\n\ncohort.l_min = 10  # trailing\ntrain.learning_rate=0.05\ncontrol.allow_overflow = true\n"
               "rng_seed = 7\nsynth.conspiracy.reply_share = 0.3\n");
  CHECK(c.l_min == 10);
  CHECK(c.train.learning_rate == 0.05);
  CHECK(c.control_allow_overflow);
  CHECK(c.rng_seed == 7);
  CHECK(c.synth_spec().conspiracy.reply_share == 0.3);
  CHECK(c.synth_spec().rng_seed == 7);
  CHECK(c.train_config().rng_seed == 7);
}

TEST_CASE("every bad line is reported in one error") {
  RunConfig c;
  const auto msg = error_of([&] { c.apply_text("bogus = 1\nworkers = many\nno equals sign\nsynth.nope = 2\n", "f.conf"); });
  CHECK(contains(msg, "f.conf:1"));
  CHECK(contains(msg, "f.conf:2"));
  CHECK(contains(msg, "f.conf:3"));
  CHECK(contains(msg, "f.conf:4"));
}

TEST_CASE("validation lists every problem") {
  RunConfig c;
  c.workers = 0;
  c.max_cov = 0;
  c.train.n_trees = 0;
  c.control_bucket = "fortnight";
  c.curve_ks = "1,zero";
  c.synth["conspiracy.reply_share"] = "0.9";
  const auto msg = error_of([&] { c.validate(); });
  CHECK(contains(msg, "workers"));
  CHECK(contains(msg, "max_cov"));
  CHECK(contains(msg, "train.n_trees"));
  CHECK(contains(msg, "control.bucket"));
  CHECK(contains(msg, "curve.ks"));
  CHECK(contains(msg, "synth.conspiracy"));
  CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("automatic thresholds need a target") {
  RunConfig c;
  c.l_min = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.target_size = 100;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("curve sizes resolve 'all' and clamp") {
  RunConfig c;
  c.curve_ks = "5, all ,1,500,5";
  CHECK(c.curve_sizes(92) == std::vector<std::size_t>{1, 5, 92});
  c.curve_ks = "0";
  CHECK_THROWS_AS(c.curve_sizes(10), Error);
}

TEST_CASE("canonical text ignores workers and output directory") {
  RunConfig a, b;
  b.workers = 8;
  b.out_dir = "elsewhere";
  CHECK(a.canonical() == b.canonical());
  b.rng_seed = 1;
  CHECK(a.canonical() != b.canonical());
  RunConfig c;
  c.apply_text(a.canonical());
  CHECK(c.canonical() == a.canonical());
}

TEST_CASE("bundled default config equals the built-in defaults") {
  RunConfig c;
  c.apply_file(std::string(TRAITSCAN_DATA) + "/config/default.conf");
  CHECK_NOTHROW(c.validate());
  const auto from_file = c.synth_spec();
  const auto builtin = synth::SynthSpec::defaults();
  RunConfig plain;
  // Same values, so the non-synth keys print identically.
  c.synth.clear();
  CHECK(c.canonical() == plain.canonical());
  auto same = [](const synth::GroupProfile& x, const synth::GroupProfile& y) {
    return x.no_bio_prob == y.no_bio_prob && x.bio_words_mean == y.bio_words_mean &&
           x.bio_url_prob == y.bio_url_prob && x.reply_share == y.reply_share &&
           x.retweet_share == y.retweet_share && x.quote_share == y.quote_share &&
           x.share_jitter == y.share_jitter && x.gap_hours_mean == y.gap_hours_mean &&
           x.vocab_size == y.vocab_size && x.words_per_tweet_mean == y.words_per_tweet_mean &&
           x.negative_word_rate == y.negative_word_rate && x.positive_word_rate == y.positive_word_rate &&
           x.url_share == y.url_share && x.url_domain_pool == y.url_domain_pool &&
           x.mention_share == y.mention_share && x.hashtag_share == y.hashtag_share &&
           x.group_tag_rate == y.group_tag_rate && x.retweet_author_pool == y.retweet_author_pool &&
           x.user_spread == y.user_spread && x.followers_log_mean == y.followers_log_mean &&
           x.following_log_mean == y.following_log_mean && x.bio_hashtag_prob == y.bio_hashtag_prob;
  };
  CHECK(same(from_file.conspiracy, builtin.conspiracy));
  CHECK(same(from_file.control, builtin.control));
  CHECK(from_file.n_per_group == builtin.n_per_group);
  CHECK(from_file.engagement.likes_min == builtin.engagement.likes_min);
}

TEST_CASE("documented key list covers every settable key") {
  RunConfig c;
  for (const auto& [kv, help] : config_keys()) {
    const auto key = kv.substr(0, kv.find(' '));
    if (key == "synth.<field>") continue;
    CHECK_MESSAGE(!help.empty(), key);
    const auto value = kv.substr(kv.find('=') + 1);
    CHECK_NOTHROW(c.set(key, value));
  }
}
