// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

// Data-parallel inner loops with a scalar reference and vectorized variants.
// The variant is chosen once at runtime from the CPU's capabilities and can be
// pinned (tests, reproducibility) with set_active_isa() or the environment
// variable TRAITSCAN_ISA=scalar|avx2.
//
// Element-wise kernels (split_gains) are bit-identical across variants.
// Reductions (sum, central_sums) differ only in summation order.

namespace traitscan::simd {

enum class Isa { kScalar, kAvx2 };

const char* to_string(Isa isa);

/// Best variant compiled in and supported by this CPU.
Isa detected_isa();
bool isa_available(Isa isa);
Isa active_isa();
/// Throws traitscan::Error if the variant is unavailable.
void set_active_isa(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

struct MinMax {
  double min;
  double max;
};

/// Unnormalized central moment sums: sum (x-mean)^2 and sum (x-mean)^3.
struct CentralSums {
  double m2;
  double m3;
};

double sum(std::span<const double> xs);
/// xs must be nonempty.
MinMax min_max(std::span<const double> xs);
CentralSums central_sums(std::span<const double> xs, double mean);

/// Second-order split gain for every candidate cut, given left-side prefix
/// sums of gradients and hessians:
///   0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)).
void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out);

// Direct entry points into each variant, used for equivalence testing.
namespace scalar {
double sum(std::span<const double> xs);
MinMax min_max(std::span<const double> xs);
CentralSums central_sums(std::span<const double> xs, double mean);
void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out);
}  // namespace scalar

#ifdef TRAITSCAN_HAVE_AVX2
namespace avx2 {
double sum(std::span<const double> xs);
MinMax min_max(std::span<const double> xs);
CentralSums central_sums(std::span<const double> xs, double mean);
void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace traitscan::simd
