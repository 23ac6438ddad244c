// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "traitscan/time.hpp"

namespace traitscan {

/// Profile metadata snapshot for one account.
struct UserRecord {
  std::string user_id;
  Timestamp created_at = 0;
  std::int64_t followers_count = 0;
  std::int64_t following_count = 0;
  std::int64_t tweet_count = 0;
  std::int64_t listed_count = 0;
  bool verified = false;
  bool has_default_pic = false;
  std::optional<std::string> bio;
  std::optional<std::string> predominant_language;
  Timestamp snapshot_at = 0;

  bool operator==(const UserRecord&) const = default;
};

enum class TweetKind { kOriginal, kRetweet, kReply, kQuote };

const char* to_string(TweetKind kind);
TweetKind tweet_kind_from_string(const std::string& name);

/// One timeline item. Hashtags are stored lowercase, without '#', and
/// deduplicated in first-seen order.
struct TweetRecord {
  std::string tweet_id;
  std::string author_id;
  Timestamp created_at = 0;
  TweetKind kind = TweetKind::kOriginal;
  std::string text;
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
  std::vector<std::string> mentions;
  std::optional<std::string> retweeted_author;
  // Per-tweet language tag when the archive carries one; feeds the
  // predominant-language fallback for users without a profile language.
  std::optional<std::string> lang;

  bool operator==(const TweetRecord&) const = default;
};

struct Like {
  std::string user_id;
  std::string seed_id;
  std::string liked_tweet_id;

  bool operator==(const Like&) const = default;
};

struct Follow {
  std::string follower_id;
  std::string followee_id;

  bool operator==(const Follow&) const = default;
};

struct Corpus {
  std::map<std::string, UserRecord> users;
  // Each timeline sorted by (created_at, tweet_id).
  std::map<std::string, std::vector<TweetRecord>> timelines;
  std::vector<Like> likes;
  std::vector<Follow> follows;
  std::vector<std::string> seeds;

  const UserRecord* find_user(const std::string& id) const;
  /// Empty span when the user has no tweets.
  const std::vector<TweetRecord>& timeline(const std::string& id) const;

  bool operator==(const Corpus&) const = default;
};

/// Empty paths are skipped (treated as an empty file).
struct CorpusPaths {
  std::filesystem::path users;
  std::filesystem::path tweets;
  std::filesystem::path likes;
  std::filesystem::path follows;
  std::filesystem::path seeds;

  /// users.jsonl, tweets.jsonl, likes.jsonl, follows.jsonl, seeds.json.
  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

struct LoadStats {
  std::size_t users = 0;
  std::size_t tweets = 0;
  std::size_t likes = 0;
  std::size_t follows = 0;
  std::size_t seeds = 0;
};

struct LoadedCorpus {
  Corpus corpus;
  LoadStats stats;
};

/// Reads all corpus files (in parallel when workers > 1). Throws Error naming
/// file and line on malformed or incomplete records and on duplicate ids.
LoadedCorpus load_corpus(const CorpusPaths& paths, int workers = 1);

/// Writes the corpus in the same schema; load_corpus of the result is equal.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Orders a timeline by (created_at, tweet_id).
void sort_timeline(std::vector<TweetRecord>& timeline);

struct ValidationReport {
  std::vector<Like> dangling_likes;        // seed_id is not a listed seed
  std::vector<Follow> dangling_follows;    // endpoint unknown to users, seeds, and likers
  std::vector<std::string> retweets_without_author;  // tweet ids
  std::vector<std::string> empty_timelines;           // user ids with a profile but no tweets
  std::vector<std::string> orphan_tweets;             // tweets whose author has no profile

  bool empty() const;
};

ValidationReport validate_corpus(const Corpus& corpus);

}  // namespace traitscan
