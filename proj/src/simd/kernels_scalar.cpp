#include <cmath>

#include "ldp/simd.hpp"
#include "lookup_formula.hpp"

namespace ldp::simd {
namespace {

void cumulative_lookup_scalar(const double* u, double* out, std::size_t n, const double* prefix,
                              const double* vals, std::size_t na, double a_min, double inv_da,
                              double da) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = detail::cumulative_at(u[i], prefix, vals, na, a_min, inv_da, da);
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double weighted_max_abs_diff_scalar(const double* u, const double* v, const double* w,
                                    std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = w[i] * std::abs(u[i] - v[i]);
    m = d > m ? d : m;
  }
  return m;
}

double max_abs_lag_diff_scalar(const double* u, std::size_t n, std::size_t lag) {
  double m = 0.0;
  if (lag >= n) return m;
  for (std::size_t i = 0; i + lag < n; ++i) {
    const double d = std::abs(u[i + lag] - u[i]);
    m = d > m ? d : m;
  }
  return m;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",
      &cumulative_lookup_scalar,
      &axpy_scalar,
      &weighted_max_abs_diff_scalar,
      &max_abs_lag_diff_scalar,
      &dot_scalar,
  };
  return table;
}

}  // namespace ldp::simd
