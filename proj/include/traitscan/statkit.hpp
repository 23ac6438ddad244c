// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string_view>

namespace traitscan::statkit {

/// The seven summary statistics attached to every per-user sample series.
struct DistParams {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;       // population (divide by n)
  double skewness = 0.0;  // Fisher-Pearson g1; 0 for zero-variance samples
  double entropy = 0.0;   // bits

  std::array<double, 7> as_array() const { return {min, max, mean, median, std, skewness, entropy}; }
};

/// Column suffixes in DistParams::as_array() order.
inline constexpr std::array<std::string_view, 7> kDistParamNames = {
    "min", "max", "mean", "median", "std", "skewness", "entropy"};

enum class BinPolicy {
  kAuto,         // exact values if every value is an integer, else equal-width
  kExactValues,  // one category per distinct value
  kEqualWidth,   // kEntropyBins equal-width bins spanning [min, max]
};

inline constexpr int kEntropyBins = 20;

/// Throws Error("empty sample") on empty input and on non-finite values.
DistParams dist_params(std::span<const double> values);

/// Shannon entropy (base 2) of the empirical distribution under the policy.
double entropy_of(std::span<const double> values, BinPolicy policy = BinPolicy::kAuto);

/// Population std / mean. Values must be nonnegative; throws
/// Error("undefined Cov") when the mean is 0.
double coefficient_of_variation(std::span<const double> values);

}  // namespace traitscan::statkit
