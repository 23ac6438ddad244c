// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "traitscan/corpus.hpp"
#include "traitscan/feature_matrix.hpp"

namespace traitscan::features {

/// A timeline item after tokenization, carrying everything the extractors need.
struct TokenizedTweet {
  std::vector<std::string> tokens;
  TweetKind kind = TweetKind::kOriginal;
  bool has_url = false;      // urls field nonempty or a URL placeholder token
  bool has_mention = false;  // mentions field nonempty or a mention placeholder token
  Timestamp created_at = 0;
  std::size_t chars = 0;     // NFC code points of the text
  std::optional<std::string> retweeted_author;
  std::vector<std::string> url_domains;  // one per entry of the urls field
};

TokenizedTweet tokenize_tweet(const TweetRecord& tweet);

/// Tokenizes the most recent `cap` items of a chronologically sorted
/// timeline (all of them when cap == 0), preserving order.
std::vector<TokenizedTweet> tokenize_timeline(const std::vector<TweetRecord>& timeline,
                                              std::size_t cap = 3200);

inline constexpr std::size_t kCredibilityColumns = 17;
inline constexpr std::size_t kInitiativeColumns = 19;
inline constexpr std::size_t kAdaptabilityColumns = 56;
inline constexpr std::size_t kBehavioralColumns =
    kCredibilityColumns + kInitiativeColumns + kAdaptabilityColumns;

enum class FeatureGroup { kCredibility, kInitiative, kAdaptability };

/// The 92 behavioral columns in their fixed order.
const std::vector<Column>& behavioral_columns();
FeatureGroup group_of(std::size_t behavioral_index);
const char* to_string(FeatureGroup group);

/// Profile columns. as_of defaults to the record's snapshot_at. Throws Error
/// when as_of precedes account creation.
std::array<double, kCredibilityColumns> credibility_features(const UserRecord& user,
                                                             std::optional<Timestamp> as_of = {});

/// Kind ratios plus unique-word and consecutive-pair entropy distributions.
/// An empty timeline yields all-missing columns.
std::array<double, kInitiativeColumns> initiative_features(const std::vector<TokenizedTweet>& timeline);

/// Eight per-user sample series, each summarized by the seven distribution
/// parameters. Empty series yield missing parameters.
std::array<double, kAdaptabilityColumns> adaptability_features(
    const std::vector<TokenizedTweet>& timeline);

/// Raw series behind the adaptability columns, exposed for testing.
struct AdaptabilitySeries {
  std::vector<double> language_novelty;
  std::vector<double> time_between_tweets;
  std::vector<double> time_between_retweets;
  std::vector<double> time_between_mentions;
  std::vector<double> retweeted_accounts;
  std::vector<double> url_domains;
  std::vector<double> tweet_words;
  std::vector<double> tweet_chars;
};
AdaptabilitySeries adaptability_series(const std::vector<TokenizedTweet>& timeline);

/// Per-tweet distinct-token counts and consecutive-pair entropies (bits).
std::vector<double> unique_word_counts(const std::vector<TokenizedTweet>& timeline);
std::vector<double> pair_entropies(const std::vector<TokenizedTweet>& timeline);

struct LabeledUser {
  std::string user_id;
  int label = 0;  // 1 = conspiracy, 0 = control
};

/// Conspiracy users (sorted) followed by control users (sorted). Throws
/// Error when the sets overlap.
std::vector<LabeledUser> label_cohorts(const std::vector<std::string>& conspiracy,
                                       const std::vector<std::string>& control);

struct ExtractOptions {
  std::optional<Timestamp> snapshot;  // default: each user's snapshot_at
  std::size_t timeline_cap = 3200;
  int workers = 1;
};

struct ExtractResult {
  FeatureMatrix matrix;
  std::vector<std::string> warnings;
};

/// One row per user, in input order; users without a profile are skipped
/// with a warning.
ExtractResult feature_matrix(const Corpus& corpus, const std::vector<LabeledUser>& users,
                             const ExtractOptions& options = {});

}  // namespace traitscan::features
