// Naive reference implementations used as independent oracles for the
// statkit kernels. Kept deliberately plain: sorting, std::map counting,
// two-pass moments in long double.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace reference {

inline double mean(const std::vector<double>& xs) {
  long double s = 0;
  for (double x : xs) s += x;
  return static_cast<double>(s / xs.size());
}

inline double central_moment(const std::vector<double>& xs, int order) {
  const long double m = mean(xs);
  long double s = 0;
  for (double x : xs) s += std::pow(static_cast<long double>(x) - m, order);
  return static_cast<double>(s / xs.size());
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

inline double entropy_from_map(const std::map<long long, int>& counts, std::size_t n) {
  double h = 0;
  for (const auto& [k, c] : counts) {
    const double p = double(c) / double(n);
    h -= p * std::log2(p);
  }
  return h;
}

inline double entropy(const std::vector<double>& xs) {
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double hi = *std::max_element(xs.begin(), xs.end());
  const bool integral = std::all_of(xs.begin(), xs.end(), [](double x) { return x == std::floor(x); });
  std::map<long long, int> counts;
  if (integral) {
    for (double x : xs) counts[static_cast<long long>(x)]++;
  } else {
    if (lo == hi) return 0.0;
    for (double x : xs) {
      long long b = static_cast<long long>((x - lo) / (hi - lo) * 20);
      counts[std::min(b, 19LL)]++;
    }
  }
  return entropy_from_map(counts, xs.size());
}

// min, max, mean, median, std, skewness, entropy
inline std::array<double, 7> dist_params(const std::vector<double>& xs) {
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double hi = *std::max_element(xs.begin(), xs.end());
  const double m2 = central_moment(xs, 2);
  const double m3 = central_moment(xs, 3);
  const double skew = (lo == hi || m2 == 0) ? 0.0 : m3 / std::pow(m2, 1.5);
  return {lo, hi, lo == hi ? lo : mean(xs), median(xs), lo == hi ? 0.0 : std::sqrt(m2), skew,
          entropy(xs)};
}

inline double cov(const std::vector<double>& xs) {
  return std::sqrt(central_moment(xs, 2)) / mean(xs);
}

}  // namespace reference
