// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "traitscan/simd/kernels.hpp"

namespace traitscan::simd::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> xs) {
  const double* p = xs.data();
  const std::size_t n = xs.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += p[i];
  return s;
}

MinMax min_max(std::span<const double> xs) {
  const double* p = xs.data();
  const std::size_t n = xs.size();
  MinMax r{p[0], p[0]};
  std::size_t i = 0;
  if (n >= 4) {
    __m256d lo = _mm256_loadu_pd(p);
    __m256d hi = lo;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(p + i);
      lo = _mm256_min_pd(lo, v);
      hi = _mm256_max_pd(hi, v);
    }
    alignas(32) double lo_lanes[4];
    alignas(32) double hi_lanes[4];
    _mm256_store_pd(lo_lanes, lo);
    _mm256_store_pd(hi_lanes, hi);
    for (int k = 0; k < 4; ++k) {
      r.min = std::min(r.min, lo_lanes[k]);
      r.max = std::max(r.max, hi_lanes[k]);
    }
  }
  for (; i < n; ++i) {
    r.min = std::min(r.min, p[i]);
    r.max = std::max(r.max, p[i]);
  }
  return r;
}

CentralSums central_sums(std::span<const double> xs, double mean) {
  const double* p = xs.data();
  const std::size_t n = xs.size();
  const __m256d mu = _mm256_set1_pd(mean);
  __m256d m2 = _mm256_setzero_pd();
  __m256d m3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), mu);
    const __m256d d2 = _mm256_mul_pd(d, d);
    m2 = _mm256_add_pd(m2, d2);
    m3 = _mm256_add_pd(m3, _mm256_mul_pd(d2, d));
  }
  CentralSums r{hsum(m2), hsum(m3)};
  for (; i < n; ++i) {
    const double d = p[i] - mean;
    const double d2 = d * d;
    r.m2 += d2;
    r.m3 += d2 * d;
  }
  return r;
}

void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out) {
  const double parent = grad_total * grad_total / (hess_total + lambda);
  const std::size_t n = out.size();
  const __m256d g = _mm256_set1_pd(grad_total);
  const __m256d h = _mm256_set1_pd(hess_total);
  const __m256d lam = _mm256_set1_pd(lambda);
  const __m256d par = _mm256_set1_pd(parent);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gl = _mm256_loadu_pd(grad_left.data() + i);
    const __m256d hl = _mm256_loadu_pd(hess_left.data() + i);
    const __m256d left = _mm256_div_pd(_mm256_mul_pd(gl, gl), _mm256_add_pd(hl, lam));
    const __m256d gr = _mm256_sub_pd(g, gl);
    const __m256d hr = _mm256_sub_pd(h, hl);
    const __m256d right = _mm256_div_pd(_mm256_mul_pd(gr, gr), _mm256_add_pd(hr, lam));
    const __m256d gain = _mm256_mul_pd(half, _mm256_sub_pd(_mm256_add_pd(left, right), par));
    _mm256_storeu_pd(out.data() + i, gain);
  }
  for (; i < n; ++i) {
    const double gl = grad_left[i];
    const double hl = hess_left[i];
    const double left = gl * gl / (hl + lambda);
    const double gr = grad_total - gl;
    const double hr = hess_total - hl;
    const double right = gr * gr / (hr + lambda);
    out[i] = 0.5 * ((left + right) - parent);
  }
}

}  // namespace traitscan::simd::avx2
