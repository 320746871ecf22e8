// Compiled with -mavx2 only; reached through avx2_kernels() after a CPU check.

#include <immintrin.h>

#include <cmath>

#include "ldp/simd.hpp"
#include "lookup_formula.hpp"

namespace ldp::simd::avx2_impl {
namespace {

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int k = 1; k < 4; ++k) m = lanes[k] > m ? lanes[k] : m;
  return m;
}

void cumulative_lookup(const double* u, double* out, std::size_t n, const double* prefix,
                       const double* vals, std::size_t na, double a_min, double inv_da,
                       double da) {
  const __m256d vmin = _mm256_set1_pd(a_min);
  const __m256d vinv = _mm256_set1_pd(inv_da);
  const __m256d vda = _mm256_set1_pd(da);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d top = _mm256_set1_pd(static_cast<double>(na));
  const __m256d last = _mm256_set1_pd(static_cast<double>(na) - 1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(u + i), vmin), vinv);
    x = _mm256_max_pd(x, zero);
    x = _mm256_min_pd(x, top);
    __m256d jf = _mm256_floor_pd(x);
    jf = _mm256_min_pd(jf, last);
    const __m128i j = _mm256_cvttpd_epi32(jf);
    const __m256d p = _mm256_i32gather_pd(prefix, j, 8);
    const __m256d v = _mm256_i32gather_pd(vals, j, 8);
    const __m256d frac = _mm256_sub_pd(x, jf);
    const __m256d r = _mm256_add_pd(p, _mm256_mul_pd(_mm256_mul_pd(frac, vda), v));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = detail::cumulative_at(u[i], prefix, vals, na, a_min, inv_da, da);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double weighted_max_abs_diff(const double* u, const double* v, const double* w, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(
        _mm256_loadu_pd(w + i), abs_pd(_mm256_sub_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(v + i))));
    m = _mm256_max_pd(m, d);
  }
  double r = hmax(m);
  for (; i < n; ++i) {
    const double d = w[i] * std::abs(u[i] - v[i]);
    r = d > r ? d : r;
  }
  return r;
}

double max_abs_lag_diff(const double* u, std::size_t n, std::size_t lag) {
  if (lag >= n) return 0.0;
  const std::size_t count = n - lag;
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(u + i + lag), _mm256_loadu_pd(u + i)));
    m = _mm256_max_pd(m, d);
  }
  double r = hmax(m);
  for (; i < count; ++i) {
    const double d = std::abs(u[i + lag] - u[i]);
    r = d > r ? d : r;
  }
  return r;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{
      "avx2", &cumulative_lookup, &axpy, &weighted_max_abs_diff, &max_abs_lag_diff, &dot,
  };
  return t;
}

}  // namespace ldp::simd::avx2_impl
