#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
//
// Elementwise kernels and max-reductions are bit-identical across variants
// (no FMA, identical operation order per lane). `dot` is a sum reduction
// and only agrees to rounding.
//
// The active table is chosen once at first use: AVX2 when the CPU supports
// it, unless the environment variable LDP_SIMD=scalar forces the reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace ldp::simd {

struct KernelTable {
  std::string_view name;

  /// out[i] = C(u[i]) for the piecewise-linear cumulative
  ///   C(a_min + x da) = prefix[j] + (x - j) da vals[j],  j = min(floor(x), na - 1),
  /// with x clamped to [0, na]. prefix has na + 1 entries.
  void (*cumulative_lookup)(const double* u, double* out, std::size_t n, const double* prefix,
                            const double* vals, std::size_t na, double a_min, double inv_da,
                            double da);

  /// y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// max_i w[i] |u[i] - v[i]|  (0 for n == 0)
  double (*weighted_max_abs_diff)(const double* u, const double* v, const double* w,
                                  std::size_t n);

  /// max_{i + lag < n} |u[i + lag] - u[i]|  (0 when lag >= n)
  double (*max_abs_lag_diff)(const double* u, std::size_t n, std::size_t lag);

  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_kernels();

const KernelTable& active();

// Span wrappers over the active table.

void cumulative_lookup(std::span<const double> u, std::span<double> out,
                       std::span<const double> prefix, std::span<const double> vals, double a_min,
                       double da);
void axpy(double a, std::span<const double> x, std::span<double> y);
double weighted_max_abs_diff(std::span<const double> u, std::span<const double> v,
                             std::span<const double> w);
double max_abs_lag_diff(std::span<const double> u, std::size_t lag);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace ldp::simd
