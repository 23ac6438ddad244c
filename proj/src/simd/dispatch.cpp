// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "traitscan/error.hpp"
#include "traitscan/simd/kernels.hpp"

namespace traitscan::simd {
namespace {

struct KernelTable {
  Isa isa;
  double (*sum)(std::span<const double>);
  MinMax (*min_max)(std::span<const double>);
  CentralSums (*central_sums)(std::span<const double>, double);
  void (*split_gains)(std::span<const double>, std::span<const double>, double, double, double,
                      std::span<double>);
};

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::sum, scalar::min_max,
                                   scalar::central_sums, scalar::split_gains};
#ifdef TRAITSCAN_HAVE_AVX2
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::sum, avx2::min_max, avx2::central_sums,
                                 avx2::split_gains};
#endif

bool cpu_has_avx2() {
#if defined(TRAITSCAN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
#ifdef TRAITSCAN_HAVE_AVX2
  if (isa == Isa::kAvx2) return &kAvx2Table;
#endif
  (void)isa;
  return &kScalarTable;
}

const KernelTable* initial_table() {
  Isa isa = detected_isa();
  if (const char* env = std::getenv("TRAITSCAN_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") isa = Isa::kScalar;
    else if (v == "avx2" && isa_available(Isa::kAvx2)) isa = Isa::kAvx2;
  }
  return table_for(isa);
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa detected_isa() { return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return kernels().isa; }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw Error(std::string("ISA not available: ") + to_string(isa));
  active_table().store(table_for(isa), std::memory_order_relaxed);
}

double sum(std::span<const double> xs) { return kernels().sum(xs); }
MinMax min_max(std::span<const double> xs) { return kernels().min_max(xs); }
CentralSums central_sums(std::span<const double> xs, double mean) {
  return kernels().central_sums(xs, mean);
}
void split_gains(std::span<const double> grad_left, std::span<const double> hess_left,
                 double grad_total, double hess_total, double lambda, std::span<double> out) {
  kernels().split_gains(grad_left, hess_left, grad_total, hess_total, lambda, out);
}

}  // namespace traitscan::simd
