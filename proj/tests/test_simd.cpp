#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "traitscan/rng.hpp"
#include "traitscan/simd/kernels.hpp"
#include "traitscan/statkit.hpp"

using namespace traitscan;

namespace {

std::vector<double> sample(Rng& rng, std::size_t n) {
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.normal(10.0, 25.0);
  return xs;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("scalar ISA can always be pinned") {
  simd::ScopedIsa pin(simd::Isa::kScalar);
  CHECK(simd::active_isa() == simd::Isa::kScalar);
}

#ifdef TRAITSCAN_HAVE_AVX2
TEST_CASE("avx2 kernels agree with scalar reference") {
  if (!simd::isa_available(simd::Isa::kAvx2)) {
    MESSAGE("AVX2 not supported on this CPU; skipping");
    return;
  }
  Rng rng(99);
  // Lengths straddle the 4- and 8-lane boundaries.
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 255, 1000, 3201}) {
    const auto xs = sample(rng, n);
    CAPTURE(n);
    CHECK(rel_close(simd::avx2::sum(xs), simd::scalar::sum(xs), 1e-13));
    const auto a = simd::avx2::min_max(xs);
    const auto b = simd::scalar::min_max(xs);
    CHECK(a.min == b.min);
    CHECK(a.max == b.max);
    const double mean = simd::scalar::sum(xs) / double(n);
    const auto ca = simd::avx2::central_sums(xs, mean);
    const auto cb = simd::scalar::central_sums(xs, mean);
    CHECK(rel_close(ca.m2, cb.m2, 1e-12));
    CHECK(rel_close(ca.m3, cb.m3 , 1e-10));
  }
}

TEST_CASE("avx2 split gains are bit-identical to scalar") {
  if (!simd::isa_available(simd::Isa::kAvx2)) return;
  Rng rng(5);
  for (std::size_t n : {1, 3, 4, 6, 13, 64, 255}) {
    std::vector<double> gl(n), hl(n), out_a(n), out_b(n);
    double g = 0, h = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g += rng.normal();
      h += rng.uniform() * 0.25;
      gl[i] = g;
      hl[i] = h;
    }
    g += rng.normal();
    h += 0.1;
    simd::avx2::split_gains(gl, hl, g, h, 1.0, out_a);
    simd::scalar::split_gains(gl, hl, g, h, 1.0, out_b);
    CHECK(std::memcmp(out_a.data(), out_b.data(), n * sizeof(double)) == 0);
  }
}

TEST_CASE("dist_params agrees across ISAs") {
  if (!simd::isa_available(simd::Isa::kAvx2)) return;
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto xs = sample(rng, static_cast<std::size_t>(rng.between(1, 500)));
    statkit::DistParams a, b;
    {
      simd::ScopedIsa pin(simd::Isa::kAvx2);
      a = statkit::dist_params(xs);
    }
    {
      simd::ScopedIsa pin(simd::Isa::kScalar);
      b = statkit::dist_params(xs);
    }
    const auto aa = a.as_array();
    const auto bb = b.as_array();
    for (std::size_t k = 0; k < 7; ++k) CHECK(rel_close(aa[k], bb[k], 1e-11));
  }
}
#endif
