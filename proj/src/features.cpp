// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/statkit.hpp"
#include "traitscan/text.hpp"

namespace traitscan::features {
namespace {

constexpr std::array<const char*, kCredibilityColumns> kCredibilityNames = {
    "following_count",     "followers_count",    "followers_ratio", "account_age_days",
    "followers_age_ratio", "following_age_ratio", "tweets_age_ratio", "verified",
    "has_bio",             "has_default_pic",    "has_url_in_bio",  "urls_count_bio",
    "hashtags_count_bio",  "listed_count",       "bio_sentences",   "bio_tokens",
    "bio_chars"};

constexpr std::array<const char*, 4> kBinaryNames = {"verified", "has_bio", "has_default_pic",
                                                     "has_url_in_bio"};

constexpr std::array<const char*, 5> kInitiativeRatioNames = {
    "retweet_ratio", "reply_ratio", "tweet_url_ratio", "retweet_url_ratio", "reply_url_ratio"};

constexpr std::array<const char*, 2> kInitiativeSeriesNames = {"unique_words", "pair_entropy"};

constexpr std::array<const char*, 8> kAdaptabilitySeriesNames = {
    "language_novelty",      "time_between_tweets", "time_between_retweets",
    "time_between_mentions", "retweeted_accounts",  "url_domains",
    "tweet_words",           "tweet_chars"};

constexpr std::size_t kParams = statkit::kDistParamNames.size();

std::vector<Column> make_columns() {
  std::vector<Column> cols;
  auto add = [&](std::string name) {
    const bool binary = std::find(kBinaryNames.begin(), kBinaryNames.end(), name) != kBinaryNames.end();
    cols.push_back({std::move(name), binary ? ColumnKind::kBinary : ColumnKind::kNumeric});
  };
  auto add_series = [&](const char* base) {
    for (const auto suffix : statkit::kDistParamNames) add(std::string(base) + "_" + std::string(suffix));
  };
  for (const auto* n : kCredibilityNames) add(n);
  for (const auto* n : kInitiativeRatioNames) add(n);
  for (const auto* n : kInitiativeSeriesNames) add_series(n);
  for (const auto* n : kAdaptabilitySeriesNames) add_series(n);
  return cols;
}

template <std::size_t N>
void put_params(std::array<double, N>& out, std::size_t offset, const std::vector<double>& sample) {
  if (sample.empty()) {
    std::fill_n(out.begin() + offset, kParams, kMissing);
    return;
  }
  const auto params = statkit::dist_params(sample).as_array();
  std::copy(params.begin(), params.end(), out.begin() + offset);
}

std::vector<double> gaps(const std::vector<Timestamp>& times) {
  std::vector<double> out;
  for (std::size_t i = 1; i < times.size(); ++i) out.push_back(static_cast<double>(times[i] - times[i - 1]));
  return out;
}

template <typename Map>
std::vector<double> count_values(const Map& counts) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back(static_cast<double>(n));
  return out;
}

double token_entropy(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string_view, std::size_t> freq;
  for (const auto& t : a) ++freq[t];
  for (const auto& t : b) ++freq[t];
  const double n = static_cast<double>(a.size() + b.size());
  double h = 0.0;
  for (const auto& [tok, c] : freq) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

TokenizedTweet tokenize_tweet(const TweetRecord& tweet) {
  TokenizedTweet out;
  out.tokens = text::tokenize(tweet.text);
  out.kind = tweet.kind;
  out.created_at = tweet.created_at;
  out.chars = text::char_count(tweet.text);
  out.retweeted_author = tweet.retweeted_author;
  const auto has_token = [&](std::string_view tok) {
    return std::find(out.tokens.begin(), out.tokens.end(), tok) != out.tokens.end();
  };
  out.has_url = !tweet.urls.empty() || has_token(text::kUrlToken);
  out.has_mention = !tweet.mentions.empty() || has_token(text::kMentionToken);
  for (const auto& url : tweet.urls) out.url_domains.push_back(text::registered_domain(url));
  return out;
}

std::vector<TokenizedTweet> tokenize_timeline(const std::vector<TweetRecord>& timeline, std::size_t cap) {
  const std::size_t first = cap != 0 && timeline.size() > cap ? timeline.size() - cap : 0;
  std::vector<TokenizedTweet> out;
  out.reserve(timeline.size() - first);
  for (std::size_t i = first; i < timeline.size(); ++i) out.push_back(tokenize_tweet(timeline[i]));
  return out;
}

const std::vector<Column>& behavioral_columns() {
  static const std::vector<Column> columns = make_columns();
  return columns;
}

FeatureGroup group_of(std::size_t behavioral_index) {
  if (behavioral_index < kCredibilityColumns) return FeatureGroup::kCredibility;
  if (behavioral_index < kCredibilityColumns + kInitiativeColumns) return FeatureGroup::kInitiative;
  if (behavioral_index < kBehavioralColumns) return FeatureGroup::kAdaptability;
  throw Error("not a behavioral column index: " + std::to_string(behavioral_index));
}

const char* to_string(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::kCredibility: return "credibility";
    case FeatureGroup::kInitiative: return "initiative";
    case FeatureGroup::kAdaptability: return "adaptability";
  }
  return "?";
}

std::array<double, kCredibilityColumns> credibility_features(const UserRecord& user,
                                                             std::optional<Timestamp> as_of) {
  const Timestamp snap = as_of.value_or(user.snapshot_at);
  if (snap < user.created_at)
    throw Error("snapshot precedes account creation for user " + user.user_id);
  const double age_days = static_cast<double>(snap - user.created_at) / kSecondsPerDay;
  const double age_guard = std::max(age_days, 1.0);
  const double followers = static_cast<double>(user.followers_count);
  const double following = static_cast<double>(user.following_count);
  const double denom = std::max(followers, 1.0);

  const std::string bio = user.bio.value_or("");
  const bool has_bio = !bio.empty();
  const std::size_t bio_urls = has_bio ? text::find_urls(bio).size() : 0;

  return {
      following,
      followers,
      following / (denom * denom),
      age_days,
      followers / age_guard,
      following / age_guard,
      static_cast<double>(user.tweet_count) / age_guard,
      user.verified ? 1.0 : 0.0,
      has_bio ? 1.0 : 0.0,
      user.has_default_pic ? 1.0 : 0.0,
      bio_urls > 0 ? 1.0 : 0.0,
      static_cast<double>(bio_urls),
      static_cast<double>(has_bio ? text::hashtag_count(bio) : 0),
      static_cast<double>(user.listed_count),
      static_cast<double>(has_bio ? text::sentence_count(bio) : 0),
      static_cast<double>(has_bio ? text::tokenize(bio).size() : 0),
      static_cast<double>(has_bio ? text::char_count(bio) : 0),
  };
}

std::vector<double> unique_word_counts(const std::vector<TokenizedTweet>& timeline) {
  std::vector<double> out;
  out.reserve(timeline.size());
  for (const auto& t : timeline) {
    const std::set<std::string_view> distinct(t.tokens.begin(), t.tokens.end());
    out.push_back(static_cast<double>(distinct.size()));
  }
  return out;
}

std::vector<double> pair_entropies(const std::vector<TokenizedTweet>& timeline) {
  std::vector<double> out;
  for (std::size_t i = 1; i < timeline.size(); ++i)
    out.push_back(token_entropy(timeline[i - 1].tokens, timeline[i].tokens));
  return out;
}

std::array<double, kInitiativeColumns> initiative_features(const std::vector<TokenizedTweet>& timeline) {
  std::array<double, kInitiativeColumns> out;
  if (timeline.empty()) {
    out.fill(kMissing);
    return out;
  }
  std::size_t retweets = 0, replies = 0, with_url = 0, retweet_url = 0, reply_url = 0;
  for (const auto& t : timeline) {
    retweets += t.kind == TweetKind::kRetweet;
    replies += t.kind == TweetKind::kReply;
    with_url += t.has_url;
    retweet_url += t.has_url && t.kind == TweetKind::kRetweet;
    reply_url += t.has_url && t.kind == TweetKind::kReply;
  }
  const double n = static_cast<double>(timeline.size());
  out[0] = static_cast<double>(retweets) / n;
  out[1] = static_cast<double>(replies) / n;
  out[2] = static_cast<double>(with_url) / n;
  out[3] = static_cast<double>(retweet_url) / n;
  out[4] = static_cast<double>(reply_url) / n;
  put_params(out, 5, unique_word_counts(timeline));
  put_params(out, 5 + kParams, pair_entropies(timeline));
  return out;
}

AdaptabilitySeries adaptability_series(const std::vector<TokenizedTweet>& timeline) {
  AdaptabilitySeries s;
  std::unordered_set<std::string> seen;
  std::vector<Timestamp> all_times, retweet_times, mention_times;
  std::map<std::string, std::size_t> authors, domains;
  for (const auto& t : timeline) {
    if (!t.tokens.empty()) {
      const std::set<std::string> types(t.tokens.begin(), t.tokens.end());
      std::size_t fresh = 0;
      for (const auto& tok : types) fresh += seen.insert(tok).second;
      s.language_novelty.push_back(100.0 * static_cast<double>(fresh) / static_cast<double>(types.size()));
    }
    all_times.push_back(t.created_at);
    if (t.kind == TweetKind::kRetweet) {
      retweet_times.push_back(t.created_at);
      if (t.retweeted_author) ++authors[*t.retweeted_author];
    }
    if (t.has_mention) mention_times.push_back(t.created_at);
    for (const auto& d : t.url_domains)
      if (!d.empty()) ++domains[d];
    s.tweet_words.push_back(static_cast<double>(t.tokens.size()));
    s.tweet_chars.push_back(static_cast<double>(t.chars));
  }
  s.time_between_tweets = gaps(all_times);
  s.time_between_retweets = gaps(retweet_times);
  s.time_between_mentions = gaps(mention_times);
  s.retweeted_accounts = count_values(authors);
  s.url_domains = count_values(domains);
  return s;
}

std::array<double, kAdaptabilityColumns> adaptability_features(
    const std::vector<TokenizedTweet>& timeline) {
  std::array<double, kAdaptabilityColumns> out;
  const auto s = adaptability_series(timeline);
  const std::array<const std::vector<double>*, 8> series = {
      &s.language_novelty,      &s.time_between_tweets, &s.time_between_retweets,
      &s.time_between_mentions, &s.retweeted_accounts,  &s.url_domains,
      &s.tweet_words,           &s.tweet_chars};
  for (std::size_t i = 0; i < series.size(); ++i) put_params(out, i * kParams, *series[i]);
  return out;
}

std::vector<LabeledUser> label_cohorts(const std::vector<std::string>& conspiracy,
                                       const std::vector<std::string>& control) {
  std::set<std::string> pos(conspiracy.begin(), conspiracy.end());
  std::set<std::string> neg(control.begin(), control.end());
  for (const auto& u : pos)
    if (neg.count(u)) throw Error("user " + u + " is in both cohorts");
  std::vector<LabeledUser> out;
  for (const auto& u : pos) out.push_back({u, 1});
  for (const auto& u : neg) out.push_back({u, 0});
  return out;
}

ExtractResult feature_matrix(const Corpus& corpus, const std::vector<LabeledUser>& users,
                             const ExtractOptions& options) {
  {
    std::unordered_map<std::string, int> labels;
    for (const auto& u : users) {
      const auto [it, inserted] = labels.emplace(u.user_id, u.label);
      if (!inserted && it->second != u.label) throw Error("user " + u.user_id + " is in both cohorts");
    }
  }
  std::vector<std::optional<std::array<double, kBehavioralColumns>>> rows(users.size());
  parallel_for(users.size(), options.workers, [&](std::size_t i) {
    const UserRecord* record = corpus.find_user(users[i].user_id);
    if (!record) return;
    const auto timeline = tokenize_timeline(corpus.timeline(record->user_id), options.timeline_cap);
    std::array<double, kBehavioralColumns> row;
    const auto cred = credibility_features(*record, options.snapshot);
    const auto init = initiative_features(timeline);
    const auto adapt = adaptability_features(timeline);
    auto it = std::copy(cred.begin(), cred.end(), row.begin());
    it = std::copy(init.begin(), init.end(), it);
    std::copy(adapt.begin(), adapt.end(), it);
    rows[i] = row;
  });

  ExtractResult result{FeatureMatrix(behavioral_columns()), {}};
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!rows[i]) {
      result.warnings.push_back("user " + users[i].user_id + " has no profile record; row skipped");
      continue;
    }
    result.matrix.add_row(users[i].user_id, users[i].label, *rows[i]);
  }
  return result;
}

}  // namespace traitscan::features
