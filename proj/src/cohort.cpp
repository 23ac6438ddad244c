// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/cohort.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"
#include "traitscan/rng.hpp"
#include "traitscan/statkit.hpp"

namespace traitscan::cohort {

LikeMatrix::LikeMatrix(std::vector<std::string> seeds, std::vector<std::string> users,
                       std::vector<std::uint32_t> counts)
    : seeds_(std::move(seeds)), users_(std::move(users)), counts_(std::move(counts)) {
  if (counts_.size() != users_.size() * seeds_.size())
    throw Error("like matrix shape mismatch");
}

std::uint64_t LikeMatrix::row_total(std::size_t r) const {
  const auto cells = row(r);
  return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
}

std::size_t LikeMatrix::distinct_seeds(std::size_t r) const {
  const auto cells = row(r);
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](auto v) { return v > 0; }));
}

bool GridTable::is_monotone() const {
  for (std::size_t li = 0; li < l_axis.size(); ++li) {
    for (std::size_t si = 0; si < s_axis.size(); ++si) {
      if (li + 1 < l_axis.size() && at(li + 1, si) > at(li, si)) return false;
      if (si + 1 < s_axis.size() && at(li, si + 1) > at(li, si)) return false;
    }
  }
  return true;
}

LikeMatrix build_like_matrix(const Corpus& corpus, int workers) {
  if (corpus.seeds.empty()) throw Error("like matrix needs at least one seed");
  std::unordered_map<std::string, std::size_t> seed_col;
  for (std::size_t i = 0; i < corpus.seeds.size(); ++i) seed_col.emplace(corpus.seeds[i], i);
  const std::size_t cols = corpus.seeds.size();

  // Per-chunk partial counts merged afterwards; addition commutes, so the
  // result does not depend on the partition.
  const std::size_t chunks = static_cast<std::size_t>(std::max(1, workers));
  const std::size_t per_chunk = (corpus.likes.size() + chunks - 1) / chunks;
  std::vector<std::unordered_map<std::string, std::vector<std::uint32_t>>> partial(chunks);
  parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t begin = chunk * per_chunk;
    const std::size_t end = std::min(corpus.likes.size(), begin + per_chunk);
    auto& local = partial[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      const Like& like = corpus.likes[i];
      auto it = seed_col.find(like.seed_id);
      if (it == seed_col.end()) continue;
      auto& row = local[like.user_id];
      if (row.empty()) row.assign(cols, 0);
      row[it->second]++;
    }
  });

  std::map<std::string, std::vector<std::uint32_t>> merged;
  for (auto& local : partial) {
    for (auto& [user, row] : local) {
      auto& dst = merged[user];
      if (dst.empty()) dst.assign(cols, 0);
      for (std::size_t c = 0; c < cols; ++c) dst[c] += row[c];
    }
  }
  std::vector<std::string> users;
  std::vector<std::uint32_t> counts;
  users.reserve(merged.size());
  counts.reserve(merged.size() * cols);
  for (auto& [user, row] : merged) {
    users.push_back(user);
    counts.insert(counts.end(), row.begin(), row.end());
  }
  return LikeMatrix(corpus.seeds, std::move(users), std::move(counts));
}

LikeMatrix filter_follows_seed(const LikeMatrix& m, const Corpus& corpus) {
  const UserSet seeds(m.seeds().begin(), m.seeds().end());
  UserSet followers;
  for (const auto& f : corpus.follows)
    if (seeds.count(f.followee_id)) followers.insert(f.follower_id);
  return m.filter_rows([&](std::size_t r) { return followers.count(m.users()[r]) > 0; });
}

LikeMatrix filter_cov(const LikeMatrix& m, double max_cov) {
  std::vector<double> liked;
  return m.filter_rows([&](std::size_t r) {
    liked.clear();
    for (auto v : m.row(r))
      if (v > 0) liked.push_back(static_cast<double>(v));
    if (liked.size() <= 1) return true;
    return statkit::coefficient_of_variation(liked) <= max_cov;
  });
}

GridTable threshold_grid(const LikeMatrix& m, std::span<const int> l_axis,
                         std::span<const int> s_axis) {
  auto ascending = [](std::span<const int> axis) {
    return !axis.empty() && std::is_sorted(axis.begin(), axis.end()) &&
           std::adjacent_find(axis.begin(), axis.end()) == axis.end();
  };
  if (!ascending(l_axis) || !ascending(s_axis))
    throw Error("grid axes must be nonempty and strictly ascending");

  GridTable g{{l_axis.begin(), l_axis.end()}, {s_axis.begin(), s_axis.end()}, {}};
  g.counts.assign(l_axis.size() * s_axis.size(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto total = static_cast<std::int64_t>(m.row_total(r));
    const auto distinct = static_cast<std::int64_t>(m.distinct_seeds(r));
    for (std::size_t li = 0; li < l_axis.size() && total >= l_axis[li]; ++li)
      for (std::size_t si = 0; si < s_axis.size() && distinct >= s_axis[si]; ++si)
        g.counts[li * s_axis.size() + si]++;
  }
  if (!g.is_monotone()) throw Error("threshold grid is not monotone");
  return g;
}

UserSet select_cohort(const LikeMatrix& m, std::int64_t l_min, std::int64_t s_min) {
  if (l_min < 1 || s_min < 1) throw Error("cohort thresholds must be >= 1");
  UserSet out;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (static_cast<std::int64_t>(m.row_total(r)) >= l_min &&
        static_cast<std::int64_t>(m.distinct_seeds(r)) >= s_min)
      out.insert(m.users()[r]);
  return out;
}

Thresholds auto_thresholds(const GridTable& grid, std::uint64_t target,
                           const AutoThresholdOptions& options) {
  if (grid.l_axis.empty() || grid.s_axis.empty()) throw Error("empty threshold grid");
  std::optional<Thresholds> best;
  auto distance = [&](std::uint64_t count) {
    return count > target ? count - target : target - count;
  };
  auto better = [&](const Thresholds& a, const Thresholds& b) {
    const auto da = distance(a.count);
    const auto db = distance(b.count);
    if (da != db) return da < db;
    if (a.s_min != b.s_min) return a.s_min > b.s_min;
    return a.l_min > b.l_min;
  };
  for (std::size_t li = 0; li < grid.l_axis.size(); ++li) {
    for (std::size_t si = 0; si < grid.s_axis.size(); ++si) {
      const Thresholds cell{grid.l_axis[li], grid.s_axis[si], grid.at(li, si)};
      if (cell.l_min < options.min_likes || cell.s_min < options.min_sources) continue;
      if (options.rule == AutoRule::kNearestBelow && cell.count > target) continue;
      if (!best || better(cell, *best)) best = cell;
    }
  }
  if (!best) throw Error("no threshold cell satisfies the auto-selection constraints");
  return *best;
}

std::vector<std::pair<std::string, std::uint64_t>> top_hashtags(const Corpus& corpus,
                                                                const UserSet& cohort,
                                                                std::size_t k) {
  if (k < 1) throw Error("k must be >= 1");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& user : cohort)
    for (const auto& tweet : corpus.timeline(user))
      for (const auto& tag : tweet.hashtags) counts[tag]++;
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

UserSet seed_likers(const Corpus& corpus) {
  const UserSet seeds(corpus.seeds.begin(), corpus.seeds.end());
  UserSet out;
  for (const auto& l : corpus.likes)
    if (seeds.count(l.seed_id)) out.insert(l.user_id);
  return out;
}

UserSet topic_candidates(const Corpus& corpus, std::span<const std::string> tags) {
  const UserSet wanted(tags.begin(), tags.end());
  UserSet out;
  for (const auto& [author, tl] : corpus.timelines) {
    for (const auto& t : tl) {
      if (std::any_of(t.hashtags.begin(), t.hashtags.end(),
                      [&](const std::string& h) { return wanted.count(h) > 0; })) {
        out.insert(author);
        break;
      }
    }
  }
  return out;
}

std::string predominant_language(const Corpus& corpus, const std::string& user_id) {
  if (const UserRecord* u = corpus.find_user(user_id); u && u->predominant_language)
    return *u->predominant_language;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : corpus.timeline(user_id))
    if (t.lang) counts[*t.lang]++;
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [lang, n] : counts)
    if (n > best_count) {
      best = lang;
      best_count = n;
    }
  return best;
}

std::int64_t CreationBucket::bucket_of(Timestamp t) const {
  const CivilDate d = civil_from_timestamp(t);
  switch (unit) {
    case BucketUnit::kQuarter: return std::int64_t{d.year} * 4 + (d.month - 1) / 3;
    case BucketUnit::kMonth: return std::int64_t{d.year} * 12 + (d.month - 1);
    case BucketUnit::kYear: return d.year;
    case BucketUnit::kDays: {
      const std::int64_t width = std::int64_t{days} * kSecondsPerDay;
      return t >= 0 ? t / width : -((-t + width - 1) / width);
    }
  }
  return 0;
}

std::string CreationBucket::label(std::int64_t b) const {
  auto floor_div = [](std::int64_t a, std::int64_t n) { return a >= 0 ? a / n : -((-a + n - 1) / n); };
  char buf[64];
  switch (unit) {
    case BucketUnit::kQuarter:
      std::snprintf(buf, sizeof buf, "%lldQ%lld", static_cast<long long>(floor_div(b, 4)),
                    static_cast<long long>(b - floor_div(b, 4) * 4 + 1));
      return buf;
    case BucketUnit::kMonth:
      std::snprintf(buf, sizeof buf, "%lld-%02lld", static_cast<long long>(floor_div(b, 12)),
                    static_cast<long long>(b - floor_div(b, 12) * 12 + 1));
      return buf;
    case BucketUnit::kYear: return std::to_string(b);
    case BucketUnit::kDays: return format_iso8601(b * days * kSecondsPerDay).substr(0, 10);
  }
  return {};
}

CreationBucket CreationBucket::parse(const std::string& text) {
  if (text == "quarter") return {BucketUnit::kQuarter, 0};
  if (text == "month") return {BucketUnit::kMonth, 0};
  if (text == "year") return {BucketUnit::kYear, 0};
  if (text.size() > 1 && text.back() == 'd') {
    try {
      std::size_t used = 0;
      const int n = std::stoi(text.substr(0, text.size() - 1), &used);
      if (used == text.size() - 1 && n > 0) return {BucketUnit::kDays, n};
    } catch (const std::exception&) {
    }
  }
  throw Error("invalid creation bucket '" + text + "' (quarter, month, year, or <N>d)");
}

std::string CreationBucket::to_string() const {
  switch (unit) {
    case BucketUnit::kQuarter: return "quarter";
    case BucketUnit::kMonth: return "month";
    case BucketUnit::kYear: return "year";
    case BucketUnit::kDays: return std::to_string(days) + "d";
  }
  return {};
}

ControlResult build_control(const Corpus& corpus, const UserSet& conspiracy,
                            const UserSet& candidates, std::size_t n,
                            const ControlConstraints& constraints, std::uint64_t rng_seed) {
  const auto& bucketing = constraints.creation_bucket;
  if (bucketing.unit == BucketUnit::kDays && bucketing.days <= 0)
    throw Error("creation bucket width must be positive");

  const UserSet seeds(corpus.seeds.begin(), corpus.seeds.end());
  UserSet follow_targets = constraints.excluded_follow_targets;
  UserSet excluded = constraints.excluded_users;
  for (const auto& l : corpus.likes)
    if (seeds.count(l.seed_id)) excluded.insert(l.user_id);
  follow_targets.insert(seeds.begin(), seeds.end());
  for (const auto& f : corpus.follows)
    if (follow_targets.count(f.followee_id)) excluded.insert(f.follower_id);

  ControlResult result;
  std::map<std::int64_t, std::vector<std::string>> pool;
  for (const auto& id : candidates) {
    if (conspiracy.count(id) || excluded.count(id) || seeds.count(id)) continue;
    const UserRecord* u = corpus.find_user(id);
    if (!u) continue;
    if (predominant_language(corpus, id) != constraints.target_language) continue;
    pool[bucketing.bucket_of(u->created_at)].push_back(id);
    result.eligible++;
  }
  if (n > result.eligible)
    throw Error("control needs " + std::to_string(n) + " users but only " +
                std::to_string(result.eligible) + " candidates are eligible");

  std::vector<std::string> profiled;
  for (const auto& id : conspiracy)
    if (corpus.find_user(id)) profiled.push_back(id);
  if (n > profiled.size())
    throw Error("control size " + std::to_string(n) + " exceeds the " +
                std::to_string(profiled.size()) + " profiled conspiracy users");

  Rng rng(rng_seed);
  rng.shuffle(std::span(profiled));
  profiled.resize(n);
  std::map<std::int64_t, std::size_t> wanted;
  for (const auto& id : profiled) {
    result.matched_conspiracy_sample.insert(id);
    wanted[bucketing.bucket_of(corpus.find_user(id)->created_at)]++;
  }
  for (auto& [bucket, ids] : pool) rng.shuffle(std::span(ids));

  std::map<std::int64_t, std::size_t> taken;  // next unused index per bucket
  std::map<std::int64_t, BucketFill> fills;
  std::vector<std::string> shortfalls;
  for (const auto& [bucket, count] : wanted) {
    auto& fill = fills[bucket];
    fill.bucket = bucketing.label(bucket);
    fill.wanted = count;
    const auto it = pool.find(bucket);
    const std::size_t have = it == pool.end() ? 0 : it->second.size();
    const std::size_t take = std::min(count, have);
    for (std::size_t i = 0; i < take; ++i) result.users.insert(it->second[i]);
    taken[bucket] = take;
    fill.filled_in_bucket = take;
    if (take < count)
      shortfalls.push_back(fill.bucket + " short by " + std::to_string(count - take));
  }

  if (!shortfalls.empty() && !constraints.allow_overflow) {
    std::string msg = "insufficient eligible control candidates in creation bucket(s):";
    for (const auto& s : shortfalls) msg += " " + s + ";";
    msg.pop_back();
    throw Error(msg);
  }

  for (auto& [bucket, fill] : fills) {
    std::size_t missing = fill.wanted - fill.filled_in_bucket;
    while (missing > 0) {
      // Nearest bucket with spare candidates; ties prefer the earlier bucket.
      std::optional<std::int64_t> donor;
      for (const auto& [b, ids] : pool) {
        if (taken[b] >= ids.size()) continue;
        const auto d = b > bucket ? b - bucket : bucket - b;
        if (!donor || d < (*donor > bucket ? *donor - bucket : bucket - *donor)) donor = b;
      }
      if (!donor) throw Error("control pool exhausted during overflow fill");
      result.users.insert(pool[*donor][taken[*donor]++]);
      fill.filled_by_overflow++;
      --missing;
    }
  }
  for (auto& [bucket, fill] : fills) result.buckets.push_back(fill);
  return result;
}

}  // namespace traitscan::cohort
