// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "traitscan/corpus.hpp"

namespace traitscan::cohort {

using UserSet = std::set<std::string>;

/// Users x seed-accounts like counts. Only users with at least one like on a
/// seed appear as rows; rows are ordered by user id, columns follow seeds.json.
class LikeMatrix {
 public:
  LikeMatrix() = default;
  LikeMatrix(std::vector<std::string> seeds, std::vector<std::string> users,
             std::vector<std::uint32_t> counts);

  std::size_t rows() const { return users_.size(); }
  std::size_t cols() const { return seeds_.size(); }
  const std::vector<std::string>& seeds() const { return seeds_; }
  const std::vector<std::string>& users() const { return users_; }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return {counts_.data() + r * cols(), cols()};
  }
  std::uint32_t cell(std::size_t r, std::size_t c) const { return counts_[r * cols() + c]; }
  std::uint64_t row_total(std::size_t r) const;
  std::size_t distinct_seeds(std::size_t r) const;

  /// Rows for which keep(r) is true, in the same order.
  template <typename Pred>
  LikeMatrix filter_rows(Pred keep) const {
    std::vector<std::string> users;
    std::vector<std::uint32_t> counts;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (!keep(r)) continue;
      users.push_back(users_[r]);
      const auto cells = row(r);
      counts.insert(counts.end(), cells.begin(), cells.end());
    }
    return LikeMatrix(seeds_, std::move(users), std::move(counts));
  }

  bool operator==(const LikeMatrix&) const = default;

 private:
  std::vector<std::string> seeds_;
  std::vector<std::string> users_;
  std::vector<std::uint32_t> counts_;
};

/// entries[(l, s)] = users with total likes >= l spread over >= s distinct seeds.
struct GridTable {
  std::vector<int> l_axis;
  std::vector<int> s_axis;
  std::vector<std::uint64_t> counts;  // row-major, l_axis x s_axis

  std::uint64_t at(std::size_t li, std::size_t si) const { return counts[li * s_axis.size() + si]; }
  /// Non-increasing along both axes.
  bool is_monotone() const;
};

inline const std::vector<int> kDefaultLikeAxis = {1, 5, 10, 15, 20, 25, 30, 35};
inline const std::vector<int> kDefaultSourceAxis = {1, 2, 3, 4, 5, 6, 7};

/// Throws Error when the corpus lists no seeds.
LikeMatrix build_like_matrix(const Corpus& corpus, int workers = 1);
LikeMatrix filter_follows_seed(const LikeMatrix& m, const Corpus& corpus);
/// Keeps rows whose coefficient of variation over nonzero cells is <= max_cov.
LikeMatrix filter_cov(const LikeMatrix& m, double max_cov = 1.0);
GridTable threshold_grid(const LikeMatrix& m, std::span<const int> l_axis = kDefaultLikeAxis,
                         std::span<const int> s_axis = kDefaultSourceAxis);
UserSet select_cohort(const LikeMatrix& m, std::int64_t l_min, std::int64_t s_min);

enum class AutoRule {
  kNearest,       // minimize |count - target|
  kNearestBelow,  // largest count not exceeding target
};

struct AutoThresholdOptions {
  AutoRule rule = AutoRule::kNearest;
  int min_likes = 0;    // cells with l_min below this are not considered
  int min_sources = 0;  // cells with s_min below this are not considered
};

struct Thresholds {
  int l_min = 0;
  int s_min = 0;
  std::uint64_t count = 0;
};

/// Picks a grid cell for the requested cohort size. Ties prefer the larger
/// s_min, then the larger l_min.
Thresholds auto_thresholds(const GridTable& grid, std::uint64_t target,
                           const AutoThresholdOptions& options = {});

/// Hashtags ranked by number of cohort tweets containing them; ties by tag.
std::vector<std::pair<std::string, std::uint64_t>> top_hashtags(const Corpus& corpus,
                                                                const UserSet& cohort,
                                                                std::size_t k);

/// Every account with at least one like on a seed post.
UserSet seed_likers(const Corpus& corpus);

/// Authors of at least one tweet carrying any of the tags.
UserSet topic_candidates(const Corpus& corpus, std::span<const std::string> tags);

/// The profile language, or the modal tweet language (ties: smallest tag),
/// or "" when neither is known.
std::string predominant_language(const Corpus& corpus, const std::string& user_id);

enum class BucketUnit { kQuarter, kMonth, kYear, kDays };

/// Account-creation bucketing used for control matching.
struct CreationBucket {
  BucketUnit unit = BucketUnit::kQuarter;
  int days = 0;  // only for kDays; must be > 0

  std::int64_t bucket_of(Timestamp t) const;
  std::string label(std::int64_t bucket) const;
  /// "quarter", "month", "year", or "<N>d".
  static CreationBucket parse(const std::string& text);
  std::string to_string() const;
};

struct ControlConstraints {
  std::string target_language = "en";
  CreationBucket creation_bucket;
  UserSet excluded_users;           // typically seed_likers()
  UserSet excluded_follow_targets;  // typically the seeds
  // When false, any bucket short of candidates is an error; when true the
  // shortfall is filled from the nearest bucket that still has candidates.
  bool allow_overflow = false;
};

struct BucketFill {
  std::string bucket;
  std::size_t wanted = 0;
  std::size_t filled_in_bucket = 0;
  std::size_t filled_by_overflow = 0;
};

struct ControlResult {
  UserSet users;
  UserSet matched_conspiracy_sample;
  std::vector<BucketFill> buckets;
  std::size_t eligible = 0;
};

/// Draws n control users whose creation-bucket histogram equals that of a
/// size-n sample of the conspiracy cohort. Throws Error naming the bucket and
/// shortfall when a bucket lacks eligible candidates and overflow is off.
ControlResult build_control(const Corpus& corpus, const UserSet& conspiracy,
                            const UserSet& candidates, std::size_t n,
                            const ControlConstraints& constraints, std::uint64_t rng_seed);

}  // namespace traitscan::cohort
