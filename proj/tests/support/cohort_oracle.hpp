// Brute-force cohort oracle working directly on raw like/follow records.
// Coefficient-of-variation checks use exact integer arithmetic:
//   Cov <= c  <=>  n*sum(x^2) - (sum x)^2 <= c^2 * (sum x)^2.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "traitscan/corpus.hpp"
#include "traitscan/rng.hpp"

namespace oracle {

using Counts = std::map<std::string, std::map<std::string, std::int64_t>>;  // user -> seed -> n

inline Counts count_likes(const traitscan::Corpus& c) {
  Counts out;
  for (const auto& like : c.likes) {
    bool is_seed = false;
    for (const auto& s : c.seeds) is_seed |= (s == like.seed_id);
    if (is_seed) out[like.user_id][like.seed_id] += 1;
  }
  return out;
}

inline std::set<std::string> follow_seed_users(const traitscan::Corpus& c) {
  std::set<std::string> out;
  for (const auto& f : c.follows)
    for (const auto& s : c.seeds)
      if (f.followee_id == s) out.insert(f.follower_id);
  return out;
}

inline std::int64_t total(const std::map<std::string, std::int64_t>& row) {
  std::int64_t t = 0;
  for (const auto& [s, n] : row) t += n;
  return t;
}

inline std::int64_t distinct(const std::map<std::string, std::int64_t>& row) {
  std::int64_t d = 0;
  for (const auto& [s, n] : row) d += n > 0;
  return d;
}

// Exact test for Cov <= 1 over the nonzero cells.
inline bool cov_at_most_one(const std::map<std::string, std::int64_t>& row) {
  std::int64_t n = 0, sum = 0, sq = 0;
  for (const auto& [s, v] : row) {
    if (v == 0) continue;
    ++n;
    sum += v;
    sq += v * v;
  }
  if (n <= 1) return true;
  return n * sq - sum * sum <= sum * sum;
}

struct Pipeline {
  std::set<std::string> likers;
  std::set<std::string> after_follow;
  std::set<std::string> after_cov;
};

inline Pipeline run(const traitscan::Corpus& c) {
  Pipeline p;
  const auto counts = count_likes(c);
  const auto followers = follow_seed_users(c);
  for (const auto& [u, row] : counts) {
    p.likers.insert(u);
    if (followers.count(u)) {
      p.after_follow.insert(u);
      if (cov_at_most_one(row)) p.after_cov.insert(u);
    }
  }
  return p;
}

inline std::set<std::string> select(const traitscan::Corpus& c, const std::set<std::string>& users,
                                    std::int64_t l, std::int64_t s) {
  const auto counts = count_likes(c);
  std::set<std::string> out;
  for (const auto& u : users) {
    const auto& row = counts.at(u);
    if (total(row) >= l && distinct(row) >= s) out.insert(u);
  }
  return out;
}

// Random corpus of `users` likers over `seeds` seed accounts. Some likes hit
// non-seed accounts and some follows target non-seeds.
inline traitscan::Corpus random_like_corpus(traitscan::Rng& rng, int users, int seeds) {
  traitscan::Corpus c;
  for (int s = 0; s < seeds; ++s) c.seeds.push_back("s" + std::to_string(s));
  for (int u = 0; u < users; ++u) {
    const std::string id = "u" + std::to_string(u);
    const double density = rng.uniform();
    const bool heavy = rng.bernoulli(0.3);
    for (int s = 0; s < seeds; ++s) {
      if (!rng.bernoulli(density)) continue;
      const auto n = heavy ? rng.between(1, 25) : rng.between(1, 6);
      for (std::int64_t k = 0; k < n; ++k)
        c.likes.push_back({id, c.seeds[static_cast<std::size_t>(s)], "t" + std::to_string(k)});
    }
    if (rng.bernoulli(0.15)) c.likes.push_back({id, "elsewhere", "tx"});
    if (rng.bernoulli(0.6))
      c.follows.push_back({id, c.seeds[rng.index(static_cast<std::uint64_t>(seeds))]});
    if (rng.bernoulli(0.3)) c.follows.push_back({id, "not_a_seed"});
  }
  rng.shuffle(std::span(c.likes));
  return c;
}

}  // namespace oracle
