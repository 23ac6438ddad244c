// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/statkit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "traitscan/error.hpp"
#include "traitscan/simd/kernels.hpp"

namespace traitscan::statkit {
namespace {

void require_sample(std::span<const double> values) {
  if (values.empty()) throw Error("empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw Error("non-finite value in sample");
}

bool all_integers(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == std::floor(v); });
}

double entropy_from_counts(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double entropy_exact(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return entropy_from_counts(counts, sorted.size());
}

double entropy_binned(std::span<const double> values, double lo, double hi) {
  if (lo == hi) return 0.0;
  std::array<std::size_t, kEntropyBins> counts{};
  const double width = hi - lo;
  for (double v : values) {
    auto bin = static_cast<std::size_t>((v - lo) / width * kEntropyBins);
    counts[std::min<std::size_t>(bin, kEntropyBins - 1)]++;
  }
  return entropy_from_counts(counts, values.size());
}

}  // namespace

double entropy_of(std::span<const double> values, BinPolicy policy) {
  require_sample(values);
  if (policy == BinPolicy::kAuto)
    policy = all_integers(values) ? BinPolicy::kExactValues : BinPolicy::kEqualWidth;
  if (policy == BinPolicy::kExactValues) return entropy_exact(values);
  const auto mm = simd::min_max(values);
  return entropy_binned(values, mm.min, mm.max);
}

DistParams dist_params(std::span<const double> values) {
  require_sample(values);
  const auto n = static_cast<double>(values.size());
  const auto mm = simd::min_max(values);

  DistParams p;
  p.min = mm.min;
  p.max = mm.max;
  if (mm.min == mm.max) {
    // Constant sample: report exact values instead of rounding residue.
    p.mean = p.median = mm.min;
    return p;
  }
  p.mean = simd::sum(values) / n;
  const auto sums = simd::central_sums(values, p.mean);
  const double m2 = sums.m2 / n;
  const double m3 = sums.m3 / n;
  p.std = std::sqrt(m2);
  p.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

  std::vector<double> work(values.begin(), values.end());
  const std::size_t mid = work.size() / 2;
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid), work.end());
  const double upper = work[mid];
  if (work.size() % 2 == 1) {
    p.median = upper;
  } else {
    const double lower =
        *std::max_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid));
    p.median = (lower + upper) / 2.0;
  }

  p.entropy = all_integers(values) ? entropy_exact(values) : entropy_binned(values, mm.min, mm.max);
  return p;
}

double coefficient_of_variation(std::span<const double> values) {
  require_sample(values);
  for (double v : values)
    if (v < 0.0) throw Error("Cov requires nonnegative values");
  const double n = static_cast<double>(values.size());
  const double mean = simd::sum(values) / n;
  if (mean == 0.0) throw Error("undefined Cov");
  const auto mm = simd::min_max(values);
  if (mm.min == mm.max) return 0.0;
  const auto sums = simd::central_sums(values, mean);
  return std::sqrt(sums.m2 / n) / mean;
}

}  // namespace traitscan::statkit
