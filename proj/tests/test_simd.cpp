#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/noise.hpp"
#include "ldp/simd.hpp"

using namespace ldp;

namespace {

std::vector<double> normals(CounterRng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("scalar reference") {
  const simd::KernelTable& k = simd::scalar_kernels();
  const std::vector<double> prefix{0.0, 0.5, 0.5, 2.0};
  const std::vector<double> vals{1.0, 0.0, 3.0};
  // Cells of width 0.5 starting at -1: C(-1) = 0, C(-0.5) = 0.5, C(0) = 0.5, C(0.5) = 2.
  const std::vector<double> u{-2.0, -0.75, 0.25, 0.5, 9.0};
  std::vector<double> out(u.size());
  k.cumulative_lookup(u.data(), out.data(), u.size(), prefix.data(), vals.data(), 3, -1.0, 2.0, 0.5);
  CHECK(out == std::vector<double>{0.0, 0.25, 1.25, 2.0, 2.0});

  std::vector<double> y{1.0, 1.0};
  k.axpy(2.0, std::vector<double>{1.0, -1.0}.data(), y.data(), 2);
  CHECK(y == std::vector<double>{3.0, -1.0});

  const std::vector<double> a{0.0, 1.0, 5.0, 2.0};
  CHECK(k.max_abs_lag_diff(a.data(), 4, 1) == 4.0);
  CHECK(k.max_abs_lag_diff(a.data(), 4, 4) == 0.0);
  CHECK(k.dot(a.data(), a.data(), 4) == 30.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const simd::KernelTable* fast = simd::avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  CounterRng rng(21, 0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 321u, 1001u}) {
    CAPTURE(n);
    const std::size_t na = 17;
    const auto vals = normals(rng, na);
    std::vector<double> prefix(na + 1, 0.0);
    const double a_min = -1.3, da = 0.2;
    for (std::size_t j = 0; j < na; ++j) prefix[j + 1] = prefix[j] + vals[j] * da;
    const auto u = normals(rng, n, 2.5);  // reaches outside [a_min, a_max]
    std::vector<double> o1(n), o2(n);
    ref.cumulative_lookup(u.data(), o1.data(), n, prefix.data(), vals.data(), na, a_min, 1.0 / da, da);
    fast->cumulative_lookup(u.data(), o2.data(), n, prefix.data(), vals.data(), na, a_min, 1.0 / da, da);
    CHECK(o1 == o2);

    auto y1 = normals(rng, n);
    auto y2 = y1;
    const auto x = normals(rng, n);
    ref.axpy(0.37, x.data(), y1.data(), n);
    fast->axpy(0.37, x.data(), y2.data(), n);
    CHECK(y1 == y2);

    const auto w = normals(rng, n);
    CHECK(ref.weighted_max_abs_diff(u.data(), x.data(), w.data(), n) ==
          fast->weighted_max_abs_diff(u.data(), x.data(), w.data(), n));
    for (std::size_t lag : {1u, 2u, 5u, 9u}) {
      CHECK(ref.max_abs_lag_diff(u.data(), n, lag) == fast->max_abs_lag_diff(u.data(), n, lag));
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(u[i] * x[i]);
    CHECK(std::abs(ref.dot(u.data(), x.data(), n) - fast->dot(u.data(), x.data(), n)) <= 1e-14 * scale);
  }
}

TEST_CASE("active table") {
  const std::string_view name = simd::active().name;
  CHECK((name == "scalar" || name == "avx2"));
}
