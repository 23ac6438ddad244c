// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <variant>

#include <json.hpp>

#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/rng.hpp"

namespace traitscan::synth {
namespace {

// Small fixed word pools. Emotive words overlap the bundled mini lexicon so
// lexicon features have something to find.
constexpr std::array<const char*, 14> kNegativeWords = {
    "abandon", "afraid", "angry", "betray", "cheat", "danger", "fake",
    "lie",     "panic",  "poison", "rage",  "shock", "grief",  "sudden"};
constexpr std::array<const char*, 10> kPositiveWords = {"celebrate", "delight", "friend", "happy",
                                                        "hope",      "love",    "proof",  "truth",
                                                        "wonderful", "wait"};
constexpr std::array<const char*, 8> kSharedTags = {"covid19", "ukraine", "pfizer",  "who",
                                                    "bitcoin", "news",    "climate", "monkeypox"};
constexpr std::array<const char*, 6> kConspiracyTags = {"wakeup",  "plandemic", "nwo",
                                                        "freedom", "truthbomb", "vaccinedeaths"};
constexpr std::array<const char*, 6> kControlTags = {"music", "football", "travel", "food", "tech", "movies"};
constexpr std::array<const char*, 12> kSyllables = {"ka", "lo", "mi", "ne", "ru", "ta",
                                                    "vo", "si", "de", "pa", "gu", "el"};

enum class Role { kConspiracist, kControl, kOffLanguage, kNoiseLight, kNoiseUneven };

struct Slot {
  Role role;
  std::string user_id;
  Timestamp created_at = 0;
};

struct UserOut {
  std::optional<UserRecord> profile;
  std::vector<TweetRecord> tweets;
  std::vector<Like> likes;
  std::vector<Follow> follows;
};

// Stream ids for derive_seed; each slot gets its own family.
constexpr std::uint64_t kIdStream = 1;
constexpr std::uint64_t kCreationStream = 2;
constexpr std::uint64_t kUserStream = 3;

std::uint64_t slot_stream(std::size_t slot, std::uint64_t purpose) { return (slot + 1) * 16 + purpose; }

std::string vocab_word(std::size_t i) {
  std::string w;
  do {
    w += kSyllables[i % kSyllables.size()];
    i /= kSyllables.size();
  } while (i > 0);
  return w;
}

// Skewed index in [0, n): low indices are more frequent.
std::size_t skewed(Rng& rng, int n) {
  const double u = rng.uniform();
  return std::min(static_cast<std::size_t>(u * u * n), static_cast<std::size_t>(n - 1));
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

Timestamp quarter_start(Timestamp t) {
  const auto d = civil_from_timestamp(t);
  return timestamp_from_civil(d.year, (d.month - 1) / 3 * 3 + 1, 1);
}

Timestamp next_quarter(Timestamp q) {
  const auto d = civil_from_timestamp(q);
  return d.month >= 10 ? timestamp_from_civil(d.year + 1, 1, 1) : timestamp_from_civil(d.year, d.month + 3, 1);
}

// Each user draws their own parameters around the group profile, so group
// differences compete with between-user variation.
GroupProfile personalize(const GroupProfile& g, Rng& rng) {
  GroupProfile p = g;
  auto scale = [&] { return std::exp(rng.normal(0.0, g.user_spread)); };
  p.gap_hours_mean *= scale();
  p.words_per_tweet_mean *= scale();
  p.vocab_size = std::max(1, static_cast<int>(std::lround(p.vocab_size * scale())));
  p.negative_word_rate = std::min(0.5, p.negative_word_rate * scale());
  p.positive_word_rate = std::min(0.5, p.positive_word_rate * scale());
  p.url_share = std::min(1.0, p.url_share * scale());
  p.mention_share = std::min(1.0, p.mention_share * scale());
  p.hashtag_share = std::min(1.0, p.hashtag_share * scale());
  return p;
}

class UserGenerator {
 public:
  UserGenerator(const SynthSpec& spec, const GroupProfile& profile, const std::vector<std::string>& seeds,
                const std::vector<std::string>& all_users, Rng& rng)
      : spec_(spec), p_(personalize(profile, rng)), seeds_(seeds), all_users_(all_users), rng_(rng) {}

  std::string sentence(double mean_words) {
    const int n = std::max(1, static_cast<int>(std::lround(rng_.normal(mean_words, mean_words / 3.0))));
    std::string s;
    for (int i = 0; i < n; ++i) {
      if (i) s += ' ';
      const double u = rng_.uniform();
      if (u < p_.negative_word_rate)
        s += kNegativeWords[rng_.index(kNegativeWords.size())];
      else if (u < p_.negative_word_rate + p_.positive_word_rate)
        s += kPositiveWords[rng_.index(kPositiveWords.size())];
      else
        s += vocab_word(skewed(rng_, p_.vocab_size));
    }
    return s;
  }

  std::string pick_tag(Role role) {
    if (role == Role::kConspiracist && rng_.bernoulli(p_.group_tag_rate))
      return kConspiracyTags[rng_.index(kConspiracyTags.size())];
    if (role != Role::kConspiracist && rng_.bernoulli(p_.group_tag_rate))
      return kControlTags[rng_.index(kControlTags.size())];
    return kSharedTags[rng_.index(kSharedTags.size())];
  }

  std::string handle() { return all_users_[rng_.index(all_users_.size())]; }

  UserRecord profile(const Slot& slot, std::size_t timeline_size, Timestamp snapshot) {
    UserRecord u;
    u.user_id = slot.user_id;
    u.created_at = slot.created_at;
    u.snapshot_at = snapshot;
    u.followers_count = static_cast<std::int64_t>(std::exp(rng_.normal(p_.followers_log_mean, p_.followers_log_sd)));
    u.following_count = static_cast<std::int64_t>(std::exp(rng_.normal(p_.following_log_mean, p_.following_log_sd)));
    u.tweet_count = static_cast<std::int64_t>(timeline_size + rng_.index(5000));
    u.listed_count = static_cast<std::int64_t>(rng_.index(static_cast<std::uint64_t>(u.followers_count / 50 + 1)));
    u.verified = rng_.bernoulli(p_.verified_prob);
    u.has_default_pic = rng_.bernoulli(p_.default_pic_prob);
    if (!rng_.bernoulli(p_.no_bio_prob)) {
      std::string bio = sentence(p_.bio_words_mean / 2.0) + ". " + sentence(p_.bio_words_mean / 2.0) + ".";
      if (rng_.bernoulli(p_.bio_url_prob)) bio += " https://bio" + std::to_string(rng_.index(50)) + ".example/me";
      if (rng_.bernoulli(p_.bio_hashtag_prob)) bio += " #" + pick_tag(slot.role);
      u.bio = bio;
    }
    const bool english = slot.role != Role::kOffLanguage;
    // A fifth of profiles leave the language unset; tweets still carry it.
    if (rng_.bernoulli(0.8)) u.predominant_language = english ? "en" : "es";
    return u;
  }

  std::vector<TweetRecord> timeline(const Slot& slot, Timestamp snapshot) {
    const auto n = static_cast<int>(rng_.between(spec_.tweets_min, spec_.tweets_max));
    const double reply = std::clamp(p_.reply_share + p_.share_jitter * (2 * rng_.uniform() - 1), 0.0, 1.0);
    const double retweet = std::clamp(p_.retweet_share + p_.share_jitter * (2 * rng_.uniform() - 1), 0.0, 1.0);
    const double gap_seconds = p_.gap_hours_mean * 3600.0;
    std::vector<TweetRecord> out;
    Timestamp t = snapshot;
    for (int i = 0; i < n; ++i) {
      t -= static_cast<Timestamp>(std::llround(rng_.exponential(gap_seconds)));
      if (t < slot.created_at) break;
      TweetRecord tw;
      tw.tweet_id = slot.user_id + "_" + std::to_string(i);
      tw.author_id = slot.user_id;
      tw.created_at = t;
      tw.lang = slot.role == Role::kOffLanguage ? "es" : "en";
      const double k = rng_.uniform();
      tw.kind = k < reply                              ? TweetKind::kReply
                : k < reply + retweet                  ? TweetKind::kRetweet
                : k < reply + retweet + p_.quote_share ? TweetKind::kQuote
                                                       : TweetKind::kOriginal;
      std::string text;
      if (tw.kind == TweetKind::kReply) {
        const auto h = handle();
        text = "@" + h + " ";
        tw.mentions.push_back(h);
      }
      text += sentence(p_.words_per_tweet_mean);
      if (rng_.bernoulli(p_.mention_share)) {
        const auto h = handle();
        text += " @" + h;
        if (std::find(tw.mentions.begin(), tw.mentions.end(), h) == tw.mentions.end()) tw.mentions.push_back(h);
      }
      if (rng_.bernoulli(p_.hashtag_share)) {
        for (auto c = 1 + rng_.index(2); c > 0; --c) {
          const auto tag = pick_tag(slot.role);
          text += " #" + tag;
          if (std::find(tw.hashtags.begin(), tw.hashtags.end(), tag) == tw.hashtags.end())
            tw.hashtags.push_back(tag);
        }
      }
      if (rng_.bernoulli(p_.url_share)) {
        const auto url = "https://news" + std::to_string(skewed(rng_, p_.url_domain_pool)) + ".example/a/" +
                         std::to_string(rng_.index(100000));
        text += " " + url;
        tw.urls.push_back(url);
      }
      if (tw.kind == TweetKind::kRetweet)
        tw.retweeted_author = "acct" + std::to_string(skewed(rng_, p_.retweet_author_pool));
      tw.text = std::move(text);
      out.push_back(std::move(tw));
    }
    sort_timeline(out);
    return out;
  }

  std::vector<Like> likes_over(const std::string& user, const std::vector<std::size_t>& seed_idx,
                               std::vector<int> cells) {
    std::vector<Like> out;
    for (std::size_t j = 0; j < seed_idx.size(); ++j)
      for (int k = 0; k < cells[j]; ++k) {
        const auto& seed = seeds_[seed_idx[j]];
        out.push_back({user, seed, seed + "_p" + std::to_string(rng_.index(1000))});
      }
    return out;
  }

  std::vector<std::size_t> pick_seeds(int count) {
    std::vector<std::size_t> idx(seeds_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng_.shuffle(std::span<std::size_t>(idx));
    idx.resize(static_cast<std::size_t>(count));
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  // Near-uniform spread of likes over several seeds (low Cov).
  std::vector<Like> planted_likes(const std::string& user) {
    const auto& e = spec_.engagement;
    const int total = static_cast<int>(rng_.between(e.likes_min, e.likes_max));
    const int s = static_cast<int>(rng_.between(e.seeds_min, e.seeds_max));
    const auto idx = pick_seeds(s);
    std::vector<int> cells(static_cast<std::size_t>(s), total / s);
    for (int i = 0; i < total % s; ++i) ++cells[static_cast<std::size_t>(i)];
    for (int k = 0; k < s; ++k) {
      const auto a = rng_.index(cells.size()), b = rng_.index(cells.size());
      const int move = static_cast<int>(rng_.index(static_cast<std::uint64_t>(cells[a] / 3 + 1)));
      if (cells[a] - move >= 1) {
        cells[a] -= move;
        cells[b] += move;
      }
    }
    return likes_over(user, idx, cells);
  }

  std::vector<Follow> follow_seeds(const std::string& user, int count) {
    std::vector<Follow> out;
    for (const auto i : pick_seeds(count)) out.push_back({user, seeds_[i]});
    return out;
  }

  UserOut generate(const Slot& slot, Timestamp snapshot) {
    UserOut out;
    const auto& e = spec_.engagement;
    switch (slot.role) {
      case Role::kNoiseLight: {
        const int s = static_cast<int>(rng_.between(1, 2));
        const int per = static_cast<int>(rng_.between(1, std::max(1, e.likes_min / 6)));
        out.likes = likes_over(slot.user_id, pick_seeds(s), std::vector<int>(static_cast<std::size_t>(s), per));
        if (rng_.bernoulli(0.5)) out.follows = follow_seeds(slot.user_id, 1);
        return out;
      }
      case Role::kNoiseUneven: {
        const auto idx = pick_seeds(4);
        std::vector<int> cells = {static_cast<int>(rng_.between(e.likes_max, 2 * e.likes_max)), 1, 1, 1};
        out.likes = likes_over(slot.user_id, idx, cells);
        out.follows = follow_seeds(slot.user_id, 1);
        return out;
      }
      default:
        break;
    }
    out.tweets = timeline(slot, snapshot);
    out.profile = profile(slot, out.tweets.size(), snapshot);
    if (slot.role == Role::kConspiracist) {
      out.likes = planted_likes(slot.user_id);
      out.follows = follow_seeds(slot.user_id, static_cast<int>(rng_.between(e.follows_min, e.follows_max)));
    } else {
      for (auto c = rng_.between(1, 3); c > 0; --c) {
        const auto other = handle();
        if (other != slot.user_id) out.follows.push_back({slot.user_id, other});
      }
    }
    return out;
  }

 private:
  const SynthSpec& spec_;
  const GroupProfile p_;
  const std::vector<std::string>& seeds_;
  const std::vector<std::string>& all_users_;
  Rng& rng_;
};

// Reflection table for apply().
using FieldPtr = std::variant<double*, int*, std::uint64_t*, std::string*>;

void profile_fields(std::vector<std::pair<std::string, FieldPtr>>& out, const std::string& prefix, GroupProfile& p) {
  auto add = [&](const char* name, FieldPtr ptr) { out.emplace_back(prefix + name, ptr); };
  add("no_bio_prob", &p.no_bio_prob);
  add("bio_words_mean", &p.bio_words_mean);
  add("bio_url_prob", &p.bio_url_prob);
  add("bio_hashtag_prob", &p.bio_hashtag_prob);
  add("followers_log_mean", &p.followers_log_mean);
  add("followers_log_sd", &p.followers_log_sd);
  add("following_log_mean", &p.following_log_mean);
  add("following_log_sd", &p.following_log_sd);
  add("verified_prob", &p.verified_prob);
  add("default_pic_prob", &p.default_pic_prob);
  add("reply_share", &p.reply_share);
  add("retweet_share", &p.retweet_share);
  add("quote_share", &p.quote_share);
  add("share_jitter", &p.share_jitter);
  add("gap_hours_mean", &p.gap_hours_mean);
  add("vocab_size", &p.vocab_size);
  add("words_per_tweet_mean", &p.words_per_tweet_mean);
  add("negative_word_rate", &p.negative_word_rate);
  add("positive_word_rate", &p.positive_word_rate);
  add("url_share", &p.url_share);
  add("url_domain_pool", &p.url_domain_pool);
  add("mention_share", &p.mention_share);
  add("hashtag_share", &p.hashtag_share);
  add("group_tag_rate", &p.group_tag_rate);
  add("retweet_author_pool", &p.retweet_author_pool);
  add("user_spread", &p.user_spread);
}

std::vector<std::pair<std::string, FieldPtr>> spec_fields(SynthSpec& s) {
  std::vector<std::pair<std::string, FieldPtr>> f;
  profile_fields(f, "conspiracy.", s.conspiracy);
  profile_fields(f, "control.", s.control);
  f.emplace_back("engagement.likes_min", &s.engagement.likes_min);
  f.emplace_back("engagement.likes_max", &s.engagement.likes_max);
  f.emplace_back("engagement.seeds_min", &s.engagement.seeds_min);
  f.emplace_back("engagement.seeds_max", &s.engagement.seeds_max);
  f.emplace_back("engagement.follows_min", &s.engagement.follows_min);
  f.emplace_back("engagement.follows_max", &s.engagement.follows_max);
  f.emplace_back("engagement.noise_liker_ratio", &s.engagement.noise_liker_ratio);
  f.emplace_back("n_per_group", &s.n_per_group);
  f.emplace_back("n_seeds", &s.n_seeds);
  f.emplace_back("rng_seed", &s.rng_seed);
  f.emplace_back("separation", &s.separation);
  f.emplace_back("control_pool_factor", &s.control_pool_factor);
  f.emplace_back("off_language_ratio", &s.off_language_ratio);
  f.emplace_back("tweets_min", &s.tweets_min);
  f.emplace_back("tweets_max", &s.tweets_max);
  f.emplace_back("creation_from", &s.creation_from);
  f.emplace_back("creation_to", &s.creation_to);
  f.emplace_back("snapshot", &s.snapshot);
  return f;
}

void check_profile(std::vector<std::string>& errs, const std::string& name, const GroupProfile& p) {
  auto prob = [&](const char* field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) errs.push_back(name + "." + field + " must be in [0,1]");
  };
  prob("no_bio_prob", p.no_bio_prob);
  prob("bio_url_prob", p.bio_url_prob);
  prob("bio_hashtag_prob", p.bio_hashtag_prob);
  prob("verified_prob", p.verified_prob);
  prob("default_pic_prob", p.default_pic_prob);
  prob("reply_share", p.reply_share);
  prob("retweet_share", p.retweet_share);
  prob("quote_share", p.quote_share);
  prob("url_share", p.url_share);
  prob("mention_share", p.mention_share);
  prob("hashtag_share", p.hashtag_share);
  prob("group_tag_rate", p.group_tag_rate);
  prob("negative_word_rate", p.negative_word_rate);
  prob("positive_word_rate", p.positive_word_rate);
  if (p.negative_word_rate + p.positive_word_rate > 1.0)
    errs.push_back(name + ": negative_word_rate + positive_word_rate exceeds 1");
  if (p.reply_share + p.retweet_share + p.quote_share + 2 * p.share_jitter > 1.0)
    errs.push_back(name + ": reply + retweet + quote shares (plus jitter) exceed 1");
  if (p.share_jitter < 0 || p.share_jitter > std::min(p.reply_share, p.retweet_share))
    errs.push_back(name + ".share_jitter must be in [0, min(reply_share, retweet_share)]");
  if (!(p.bio_words_mean > 0)) errs.push_back(name + ".bio_words_mean must be > 0");
  if (!(p.words_per_tweet_mean > 0)) errs.push_back(name + ".words_per_tweet_mean must be > 0");
  if (!(p.gap_hours_mean > 0)) errs.push_back(name + ".gap_hours_mean must be > 0");
  if (p.vocab_size < 1) errs.push_back(name + ".vocab_size must be >= 1");
  if (p.url_domain_pool < 1) errs.push_back(name + ".url_domain_pool must be >= 1");
  if (p.retweet_author_pool < 1) errs.push_back(name + ".retweet_author_pool must be >= 1");
  if (!(p.user_spread >= 0 && p.user_spread <= 2)) errs.push_back(name + ".user_spread must be in [0,2]");
  if (p.followers_log_sd < 0 || p.following_log_sd < 0) errs.push_back(name + ": log-normal sd must be >= 0");
}

}  // namespace

SynthSpec SynthSpec::defaults() {
  SynthSpec s;
  GroupProfile& c = s.conspiracy;
  c.no_bio_prob = 0.35;
  c.bio_words_mean = 7.0;
  c.bio_url_prob = 0.45;
  c.bio_hashtag_prob = 0.4;
  c.reply_share = 0.35;
  c.retweet_share = 0.38;
  c.quote_share = 0.08;
  c.gap_hours_mean = 12.0;
  c.vocab_size = 800;
  c.words_per_tweet_mean = 14.0;
  c.negative_word_rate = 0.06;
  c.positive_word_rate = 0.02;
  c.url_share = 0.35;
  c.url_domain_pool = 20;
  c.mention_share = 0.25;
  c.hashtag_share = 0.4;
  c.retweet_author_pool = 110;
  return s;
}

SynthSpec SynthSpec::identical() {
  SynthSpec s = defaults();
  s.conspiracy = s.control;
  return s;
}

GroupProfile SynthSpec::effective_conspiracy() const {
  const double t = separation;
  const GroupProfile& a = control;
  const GroupProfile& b = conspiracy;
  GroupProfile p = b;
  auto mix = [&](double GroupProfile::*f) { p.*f = lerp(a.*f, b.*f, t); };
  auto mix_int = [&](int GroupProfile::*f) {
    p.*f = static_cast<int>(std::lround(lerp(a.*f, b.*f, t)));
  };
  for (auto f : {&GroupProfile::no_bio_prob, &GroupProfile::bio_words_mean, &GroupProfile::bio_url_prob,
                 &GroupProfile::bio_hashtag_prob, &GroupProfile::followers_log_mean,
                 &GroupProfile::followers_log_sd, &GroupProfile::following_log_mean,
                 &GroupProfile::following_log_sd, &GroupProfile::verified_prob, &GroupProfile::default_pic_prob,
                 &GroupProfile::reply_share, &GroupProfile::retweet_share, &GroupProfile::quote_share,
                 &GroupProfile::share_jitter, &GroupProfile::gap_hours_mean, &GroupProfile::words_per_tweet_mean,
                 &GroupProfile::negative_word_rate, &GroupProfile::positive_word_rate, &GroupProfile::url_share,
                 &GroupProfile::mention_share, &GroupProfile::hashtag_share, &GroupProfile::group_tag_rate,
                 &GroupProfile::user_spread})
    mix(f);
  for (auto f : {&GroupProfile::vocab_size, &GroupProfile::url_domain_pool, &GroupProfile::retweet_author_pool})
    mix_int(f);
  return p;
}

void SynthSpec::validate() const {
  std::vector<std::string> errs;
  check_profile(errs, "conspiracy", conspiracy);
  check_profile(errs, "control", control);
  if (n_per_group < 2) errs.push_back("n_per_group must be >= 2");
  const auto& e = engagement;
  if (e.seeds_min < 1 || e.seeds_min > e.seeds_max) errs.push_back("engagement seeds range invalid");
  if (e.seeds_max > n_seeds) errs.push_back("engagement.seeds_max exceeds n_seeds");
  if (n_seeds < 4) errs.push_back("n_seeds must be >= 4");
  if (e.likes_min < e.seeds_max || e.likes_min > e.likes_max)
    errs.push_back("engagement likes range invalid (likes_min must be >= seeds_max)");
  if (e.follows_min < 1 || e.follows_min > e.follows_max || e.follows_max > n_seeds)
    errs.push_back("engagement follows range invalid");
  if (e.noise_liker_ratio < 0) errs.push_back("engagement.noise_liker_ratio must be >= 0");
  if (!(separation >= 0.0 && separation <= 1.0)) errs.push_back("separation must be in [0,1]");
  if (!(control_pool_factor >= 1.0)) errs.push_back("control_pool_factor must be >= 1");
  if (off_language_ratio < 0) errs.push_back("off_language_ratio must be >= 0");
  if (tweets_min < 1 || tweets_min > tweets_max) errs.push_back("tweets range invalid");
  try {
    const auto from = parse_iso8601(creation_from), to = parse_iso8601(creation_to), snap = parse_iso8601(snapshot);
    if (from >= to) errs.push_back("creation_from must precede creation_to");
    if (to >= snap) errs.push_back("creation_to must precede snapshot");
  } catch (const Error& ex) {
    errs.push_back(std::string("bad date: ") + ex.what());
  }
  if (errs.empty()) return;
  std::string msg = "infeasible synth spec:";
  for (const auto& m : errs) msg += "\n  " + m;
  throw Error(msg);
}

void SynthSpec::apply(const std::map<std::string, std::string>& settings) {
  auto fields = spec_fields(*this);
  std::vector<std::string> errs;
  for (const auto& [key, value] : settings) {
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
    if (it == fields.end()) {
      errs.push_back("unknown synth key '" + key + "'");
      continue;
    }
    try {
      std::visit(
          [&](auto* ptr) {
            using T = std::remove_pointer_t<decltype(ptr)>;
            std::size_t used = 0;
            if constexpr (std::is_same_v<T, double>) {
              *ptr = std::stod(value, &used);
            } else if constexpr (std::is_same_v<T, int>) {
              *ptr = std::stoi(value, &used);
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
              *ptr = std::stoull(value, &used);
            } else {
              *ptr = value;
              used = value.size();
            }
            if (used != value.size()) throw std::invalid_argument("trailing characters");
          },
          it->second);
    } catch (const std::exception&) {
      errs.push_back("bad value for " + key + ": '" + value + "'");
    }
  }
  if (errs.empty()) return;
  std::string msg = "synth settings rejected:";
  for (const auto& m : errs) msg += "\n  " + m;
  throw Error(msg);
}

SynthOutput generate_corpus(const SynthSpec& spec, int workers) {
  spec.validate();
  const GroupProfile conspiracy = spec.effective_conspiracy();
  const auto n = static_cast<std::size_t>(spec.n_per_group);
  const auto n_control = static_cast<std::size_t>(std::ceil(spec.control_pool_factor * static_cast<double>(n)));
  const auto n_off = static_cast<std::size_t>(std::llround(spec.off_language_ratio * static_cast<double>(n)));
  const auto n_noise = static_cast<std::size_t>(std::llround(spec.engagement.noise_liker_ratio * static_cast<double>(n)));
  const Timestamp from = parse_iso8601(spec.creation_from);
  const Timestamp to = parse_iso8601(spec.creation_to);
  const Timestamp snapshot = parse_iso8601(spec.snapshot);

  std::vector<Slot> slots;
  for (std::size_t i = 0; i < n; ++i) slots.push_back({Role::kConspiracist, {}, 0});
  for (std::size_t i = 0; i < n_control; ++i) slots.push_back({Role::kControl, {}, 0});
  for (std::size_t i = 0; i < n_off; ++i) slots.push_back({Role::kOffLanguage, {}, 0});
  for (std::size_t i = 0; i < n_noise; ++i) slots.push_back({i % 2 ? Role::kNoiseUneven : Role::kNoiseLight, {}, 0});

  // Neutral ids: a seeded permutation, so ids carry no group information.
  std::vector<std::size_t> perm(slots.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng id_rng(derive_seed(spec.rng_seed, kIdStream));
  id_rng.shuffle(std::span<std::size_t>(perm));
  const int width = static_cast<int>(std::to_string(slots.size()).size()) + 1;
  std::vector<std::string> profile_ids;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::string num = std::to_string(perm[i]);
    slots[i].user_id = "user" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    if (slots[i].role != Role::kNoiseLight && slots[i].role != Role::kNoiseUneven)
      profile_ids.push_back(slots[i].user_id);
  }
  std::sort(profile_ids.begin(), profile_ids.end());

  // Conspiracists draw creation dates from the window; control candidate i
  // mirrors the creation quarter of conspiracist i mod n.
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Rng rng(derive_seed(spec.rng_seed, slot_stream(i, kCreationStream)));
    auto& s = slots[i];
    if (s.role == Role::kControl) {
      const Timestamp q = quarter_start(slots[(i - n) % n].created_at);
      const Timestamp end = std::min(next_quarter(q), to);
      s.created_at = q + static_cast<Timestamp>(rng.index(static_cast<std::uint64_t>(std::max<Timestamp>(1, end - q))));
    } else {
      s.created_at = from + static_cast<Timestamp>(rng.index(static_cast<std::uint64_t>(to - from)));
    }
  }

  std::vector<std::string> seeds;
  for (int i = 0; i < spec.n_seeds; ++i) seeds.push_back("seed" + std::string(i < 10 ? "0" : "") + std::to_string(i));

  std::vector<UserOut> outs(slots.size());
  parallel_for(slots.size(), workers, [&](std::size_t i) {
    Rng rng(derive_seed(spec.rng_seed, slot_stream(i, kUserStream)));
    const GroupProfile& p = slots[i].role == Role::kConspiracist ? conspiracy : spec.control;
    outs[i] = UserGenerator(spec, p, seeds, profile_ids, rng).generate(slots[i], snapshot);
  });

  SynthOutput result;
  result.corpus.seeds = seeds;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto& o = outs[i];
    if (o.profile) {
      result.corpus.users[slots[i].user_id] = *o.profile;
      result.ground_truth[slots[i].user_id] = slots[i].role == Role::kConspiracist ? 1 : 0;
      if (!o.tweets.empty()) result.corpus.timelines[slots[i].user_id] = std::move(o.tweets);
    }
    result.corpus.likes.insert(result.corpus.likes.end(), o.likes.begin(), o.likes.end());
    result.corpus.follows.insert(result.corpus.follows.end(), o.follows.begin(), o.follows.end());
  }
  // Deterministic file order independent of slot layout.
  std::sort(result.corpus.likes.begin(), result.corpus.likes.end(), [](const Like& a, const Like& b) {
    return std::tie(a.user_id, a.seed_id, a.liked_tweet_id) < std::tie(b.user_id, b.seed_id, b.liked_tweet_id);
  });
  std::sort(result.corpus.follows.begin(), result.corpus.follows.end(), [](const Follow& a, const Follow& b) {
    return std::tie(a.follower_id, a.followee_id) < std::tie(b.follower_id, b.followee_id);
  });
  return result;
}

void write_synth(const SynthOutput& out, const std::filesystem::path& dir) {
  write_corpus(out.corpus, dir);
  nlohmann::json truth(out.ground_truth);
  std::ofstream f(dir / "ground_truth.json", std::ios::binary);
  if (!f) throw Error("cannot write " + (dir / "ground_truth.json").string());
  f << truth.dump(1) << '\n';
}

}  // namespace traitscan::synth
