// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "traitscan/corpus.hpp"

namespace traitscan::synth {

/// Behavioral profile of one group.
struct GroupProfile {
  // profile metadata
  double no_bio_prob = 0.15;
  double bio_words_mean = 12.0;
  double bio_url_prob = 0.15;       // chance the bio carries a URL
  double bio_hashtag_prob = 0.2;
  double followers_log_mean = 5.0;  // log-normal follower / following counts
  double followers_log_sd = 1.5;
  double following_log_mean = 5.5;
  double following_log_sd = 1.2;
  double verified_prob = 0.02;
  double default_pic_prob = 0.05;
  // timeline composition
  double reply_share = 0.21;
  double retweet_share = 0.35;
  double quote_share = 0.04;
  double share_jitter = 0.08;       // per-user uniform +/- on reply and retweet shares
  double gap_hours_mean = 20.0;     // exponential inter-tweet gap
  // content
  int vocab_size = 2000;
  double words_per_tweet_mean = 12.0;
  double negative_word_rate = 0.02;
  double positive_word_rate = 0.04;
  double url_share = 0.25;
  int url_domain_pool = 60;
  double mention_share = 0.15;
  double hashtag_share = 0.3;
  double group_tag_rate = 0.2;      // fraction of hashtags from the group's own tag pool
  int retweet_author_pool = 200;
  // per-user log-normal sd applied to gap, words, vocabulary and content rates
  double user_spread = 0.5;
};

/// Planted like/follow pattern that makes the conspiracy group recoverable.
struct EngagementSpec {
  int likes_min = 30;
  int likes_max = 80;
  int seeds_min = 4;
  int seeds_max = 8;
  int follows_min = 1;
  int follows_max = 3;
  // Extra seed likers that must not pass the cohort filters, as a fraction
  // of n_per_group: half below the like thresholds, half with uneven likes.
  double noise_liker_ratio = 0.5;
};

struct SynthSpec {
  GroupProfile conspiracy;
  GroupProfile control;
  EngagementSpec engagement;
  int n_per_group = 200;
  int n_seeds = 10;
  std::uint64_t rng_seed = 42;
  // 1 = the conspiracy profile as given; 0 = identical to the control profile.
  double separation = 1.0;
  double control_pool_factor = 2.0;  // control candidates per planted conspiracist
  double off_language_ratio = 0.1;   // topical non-English candidates, fraction of n_per_group
  int tweets_min = 60;
  int tweets_max = 140;
  std::string creation_from = "2010-01-01";
  std::string creation_to = "2021-12-31";
  std::string snapshot = "2022-06-01";

  /// Default group contrasts: the conspiracy group has shorter or absent
  /// bios, more bio URLs, more replies and fewer original posts.
  static SynthSpec defaults();
  /// Both groups share the control profile.
  static SynthSpec identical();

  /// Profile actually used for the conspiracy group after applying separation.
  GroupProfile effective_conspiracy() const;

  /// Throws Error listing every infeasible field.
  void validate() const;

  /// Overrides from "key=value" settings, e.g. "conspiracy.reply_share".
  /// Throws Error listing unknown keys and bad values.
  void apply(const std::map<std::string, std::string>& settings);
};

struct SynthOutput {
  Corpus corpus;
  std::map<std::string, int> ground_truth;  // 1 = planted conspiracist
};

SynthOutput generate_corpus(const SynthSpec& spec, int workers = 1);

/// Corpus files plus ground_truth.json.
void write_synth(const SynthOutput& out, const std::filesystem::path& dir);

}  // namespace traitscan::synth
