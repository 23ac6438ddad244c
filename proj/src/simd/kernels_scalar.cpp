// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "traitscan/simd/kernels.hpp"

namespace traitscan::simd::scalar {

double sum(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

MinMax min_max(std::span<const double> xs) {
  MinMax r{xs[0], xs[0]};
  for (double x : xs) {
    r.min = std::min(r.min, x);
    r.max = std::max(r.max, x);
  }
  return r;
}

CentralSums central_sums(std::span<const double> xs, double mean) {
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
  }
  return {m2, m3};
}

void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out) {
  const double parent = grad_total * grad_total / (hess_total + lambda);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double gl = grad_left[i];
    const double hl = hess_left[i];
    const double left = gl * gl / (hl + lambda);
    const double gr = grad_total - gl;
    const double hr = hess_total - hl;
    const double right = gr * gr / (hr + lambda);
    out[i] = 0.5 * ((left + right) - parent);
  }
}

}  // namespace traitscan::simd::scalar
