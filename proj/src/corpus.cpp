// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "traitscan/error.hpp"

namespace traitscan {

using nlohmann::json;

namespace {

const std::vector<TweetRecord> kEmptyTimeline;

// Field access with errors that carry file and line.
class LineReader {
 public:
  LineReader(std::string file, std::size_t line, const json& obj)
      : file_(std::move(file)), line_(line), obj_(obj) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(file_ + ": " + msg + " at line " + std::to_string(line_));
  }

  const json& required(const char* field) const {
    auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) fail(std::string("missing field ") + field);
    return *it;
  }

  std::string str(const char* field) const {
    const json& v = required(field);
    if (!v.is_string()) fail(std::string("field ") + field + " must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> opt_str(const char* field) const {
    auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(std::string("field ") + field + " must be a string");
    return it->get<std::string>();
  }

  std::int64_t count(const char* field) const {
    const json& v = required(field);
    if (!v.is_number_integer()) fail(std::string("field ") + field + " must be an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 0) fail(std::string("field ") + field + " must be nonnegative");
    return n;
  }

  bool flag(const char* field) const {
    auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) return false;
    if (!it->is_boolean()) fail(std::string("field ") + field + " must be a boolean");
    return it->get<bool>();
  }

  Timestamp time(const char* field) const {
    const std::string s = str(field);
    try {
      return parse_iso8601(s);
    } catch (const Error& e) {
      fail(std::string("field ") + field + ": " + e.what());
    }
  }

  std::vector<std::string> str_list(const char* field) const {
    std::vector<std::string> out;
    auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) return out;
    if (!it->is_array()) fail(std::string("field ") + field + " must be an array");
    for (const auto& v : *it) {
      if (!v.is_string()) fail(std::string("field ") + field + " must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

 private:
  std::string file_;
  std::size_t line_;
  const json& obj_;
};

template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string name = path.filename().string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(name + ": malformed JSON at line " + std::to_string(lineno));
    }
    if (!obj.is_object()) throw Error(name + ": expected an object at line " + std::to_string(lineno));
    fn(LineReader(name, lineno, obj));
  }
}

std::string lower_ascii(std::string s) {
  for (char& ch : s)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return s;
}

std::vector<std::string> normalize_hashtags(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (std::string tag : raw) {
    if (!tag.empty() && tag.front() == '#') tag.erase(0, 1);
    tag = lower_ascii(std::move(tag));
    if (tag.empty() || !seen.insert(tag).second) continue;
    out.push_back(std::move(tag));
  }
  return out;
}

std::vector<UserRecord> read_users(const std::filesystem::path& path) {
  std::vector<UserRecord> users;
  if (path.empty()) return users;
  for_each_jsonl(path, [&](const LineReader& r) {
    UserRecord u;
    u.user_id = r.str("user_id");
    u.created_at = r.time("created_at");
    u.followers_count = r.count("followers_count");
    u.following_count = r.count("following_count");
    u.tweet_count = r.count("tweet_count");
    u.listed_count = r.count("listed_count");
    u.verified = r.flag("verified");
    u.has_default_pic = r.flag("has_default_pic");
    u.bio = r.opt_str("bio");
    u.predominant_language = r.opt_str("predominant_language");
    u.snapshot_at = r.time("snapshot_at");
    if (u.created_at > u.snapshot_at) r.fail("created_at is after snapshot_at");
    users.push_back(std::move(u));
  });
  return users;
}

std::vector<TweetRecord> read_tweets(const std::filesystem::path& path) {
  std::vector<TweetRecord> tweets;
  if (path.empty()) return tweets;
  for_each_jsonl(path, [&](const LineReader& r) {
    TweetRecord t;
    t.tweet_id = r.str("tweet_id");
    t.author_id = r.str("author_id");
    t.created_at = r.time("created_at");
    try {
      t.kind = tweet_kind_from_string(r.str("kind"));
    } catch (const Error& e) {
      r.fail(e.what());
    }
    t.text = r.opt_str("text").value_or("");
    t.hashtags = normalize_hashtags(r.str_list("hashtags"));
    t.urls = r.str_list("urls");
    t.mentions = r.str_list("mentions");
    t.retweeted_author = r.opt_str("retweeted_author");
    t.lang = r.opt_str("lang");
    tweets.push_back(std::move(t));
  });
  return tweets;
}

std::vector<Like> read_likes(const std::filesystem::path& path) {
  std::vector<Like> likes;
  if (path.empty()) return likes;
  for_each_jsonl(path, [&](const LineReader& r) {
    likes.push_back({r.str("user_id"), r.str("seed_id"), r.opt_str("liked_tweet_id").value_or("")});
  });
  return likes;
}

std::vector<Follow> read_follows(const std::filesystem::path& path) {
  std::vector<Follow> follows;
  if (path.empty()) return follows;
  for_each_jsonl(path, [&](const LineReader& r) {
    follows.push_back({r.str("follower_id"), r.str("followee_id")});
  });
  return follows;
}

std::vector<std::string> read_seeds(const std::filesystem::path& path) {
  std::vector<std::string> seeds;
  if (path.empty()) return seeds;
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json arr;
  try {
    arr = json::parse(in);
  } catch (const json::parse_error&) {
    throw Error(path.filename().string() + ": malformed JSON");
  }
  if (!arr.is_array()) throw Error(path.filename().string() + ": expected an array of seed ids");
  std::unordered_set<std::string> seen;
  for (const auto& v : arr) {
    if (!v.is_string()) throw Error(path.filename().string() + ": seed ids must be strings");
    auto id = v.get<std::string>();
    if (!seen.insert(id).second) throw Error(path.filename().string() + ": duplicate seed " + id);
    seeds.push_back(std::move(id));
  }
  return seeds;
}

json opt_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

void write_lines(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& row : rows) out << row.dump() << '\n';
}

}  // namespace

const char* to_string(TweetKind kind) {
  switch (kind) {
    case TweetKind::kOriginal: return "original";
    case TweetKind::kRetweet: return "retweet";
    case TweetKind::kReply: return "reply";
    case TweetKind::kQuote: return "quote";
  }
  return "original";
}

TweetKind tweet_kind_from_string(const std::string& name) {
  if (name == "original") return TweetKind::kOriginal;
  if (name == "retweet") return TweetKind::kRetweet;
  if (name == "reply") return TweetKind::kReply;
  if (name == "quote") return TweetKind::kQuote;
  throw Error("unknown tweet kind '" + name + "'");
}

const UserRecord* Corpus::find_user(const std::string& id) const {
  auto it = users.find(id);
  return it == users.end() ? nullptr : &it->second;
}

const std::vector<TweetRecord>& Corpus::timeline(const std::string& id) const {
  auto it = timelines.find(id);
  return it == timelines.end() ? kEmptyTimeline : it->second;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "users.jsonl", dir / "tweets.jsonl", dir / "likes.jsonl", dir / "follows.jsonl",
          dir / "seeds.json"};
}

void sort_timeline(std::vector<TweetRecord>& timeline) {
  std::sort(timeline.begin(), timeline.end(), [](const TweetRecord& a, const TweetRecord& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.tweet_id < b.tweet_id;
  });
}

LoadedCorpus load_corpus(const CorpusPaths& paths, int workers) {
  const auto policy = workers > 1 ? std::launch::async : std::launch::deferred;
  auto users_f = std::async(policy, read_users, paths.users);
  auto tweets_f = std::async(policy, read_tweets, paths.tweets);
  auto likes_f = std::async(policy, read_likes, paths.likes);
  auto follows_f = std::async(policy, read_follows, paths.follows);
  auto seeds_f = std::async(policy, read_seeds, paths.seeds);

  LoadedCorpus out;
  Corpus& c = out.corpus;
  auto users = users_f.get();
  auto tweets = tweets_f.get();
  c.likes = likes_f.get();
  c.follows = follows_f.get();
  c.seeds = seeds_f.get();

  for (auto& u : users) {
    std::string id = u.user_id;
    if (!c.users.emplace(id, std::move(u)).second)
      throw Error("users.jsonl: duplicate user_id " + id);
  }
  std::unordered_set<std::string> tweet_ids;
  tweet_ids.reserve(tweets.size());
  out.stats.tweets = tweets.size();
  for (auto& t : tweets) {
    if (!tweet_ids.insert(t.tweet_id).second)
      throw Error("tweets.jsonl: duplicate tweet_id " + t.tweet_id);
    std::string author = t.author_id;
    c.timelines[author].push_back(std::move(t));
  }
  for (auto& [id, tl] : c.timelines) sort_timeline(tl);

  out.stats.users = c.users.size();
  out.stats.likes = c.likes.size();
  out.stats.follows = c.follows.size();
  out.stats.seeds = c.seeds.size();
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<json> rows;
  for (const auto& [id, u] : corpus.users) {
    rows.push_back({{"user_id", u.user_id},
                    {"created_at", format_iso8601(u.created_at)},
                    {"followers_count", u.followers_count},
                    {"following_count", u.following_count},
                    {"tweet_count", u.tweet_count},
                    {"listed_count", u.listed_count},
                    {"verified", u.verified},
                    {"has_default_pic", u.has_default_pic},
                    {"bio", opt_json(u.bio)},
                    {"predominant_language", opt_json(u.predominant_language)},
                    {"snapshot_at", format_iso8601(u.snapshot_at)}});
  }
  write_lines(dir / "users.jsonl", rows);

  rows.clear();
  for (const auto& [id, tl] : corpus.timelines) {
    for (const auto& t : tl) {
      json row = {{"tweet_id", t.tweet_id},
                  {"author_id", t.author_id},
                  {"created_at", format_iso8601(t.created_at)},
                  {"kind", to_string(t.kind)},
                  {"text", t.text},
                  {"hashtags", t.hashtags},
                  {"urls", t.urls},
                  {"mentions", t.mentions},
                  {"retweeted_author", opt_json(t.retweeted_author)}};
      if (t.lang) row["lang"] = *t.lang;
      rows.push_back(std::move(row));
    }
  }
  write_lines(dir / "tweets.jsonl", rows);

  rows.clear();
  for (const auto& l : corpus.likes)
    rows.push_back({{"user_id", l.user_id}, {"seed_id", l.seed_id}, {"liked_tweet_id", l.liked_tweet_id}});
  write_lines(dir / "likes.jsonl", rows);

  rows.clear();
  for (const auto& f : corpus.follows)
    rows.push_back({{"follower_id", f.follower_id}, {"followee_id", f.followee_id}});
  write_lines(dir / "follows.jsonl", rows);

  std::ofstream seeds(dir / "seeds.json", std::ios::binary);
  if (!seeds) throw Error("cannot write " + (dir / "seeds.json").string());
  seeds << json(corpus.seeds).dump() << '\n';
}

bool ValidationReport::empty() const {
  return dangling_likes.empty() && dangling_follows.empty() && retweets_without_author.empty() &&
         empty_timelines.empty() && orphan_tweets.empty();
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  const std::unordered_set<std::string> seeds(corpus.seeds.begin(), corpus.seeds.end());
  std::unordered_set<std::string> likers;
  for (const auto& l : corpus.likes) {
    likers.insert(l.user_id);
    if (!seeds.count(l.seed_id)) report.dangling_likes.push_back(l);
  }
  auto known = [&](const std::string& id) {
    return corpus.users.count(id) || seeds.count(id) || likers.count(id);
  };
  for (const auto& f : corpus.follows)
    if (!known(f.follower_id) || !known(f.followee_id)) report.dangling_follows.push_back(f);

  for (const auto& [author, tl] : corpus.timelines) {
    const bool has_profile = corpus.users.count(author) > 0;
    for (const auto& t : tl) {
      if (t.kind == TweetKind::kRetweet && !t.retweeted_author)
        report.retweets_without_author.push_back(t.tweet_id);
      if (!has_profile) report.orphan_tweets.push_back(t.tweet_id);
    }
  }
  for (const auto& [id, u] : corpus.users) {
    auto it = corpus.timelines.find(id);
    if (it == corpus.timelines.end() || it->second.empty()) report.empty_timelines.push_back(id);
  }
  return report;
}

}  // namespace traitscan
