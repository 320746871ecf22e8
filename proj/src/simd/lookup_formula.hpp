#pragma once

#include <cmath>
#include <cstddef>

namespace ldp::simd::detail {

// Reference formula shared by the scalar kernel and the AVX2 tail loop.
inline double cumulative_at(double u, const double* prefix, const double* vals, std::size_t na,
                            double a_min, double inv_da, double da) {
  const double top = static_cast<double>(na);
  double x = (u - a_min) * inv_da;
  x = x < 0.0 ? 0.0 : x;
  x = x > top ? top : x;
  double jf = std::floor(x);
  jf = jf > top - 1.0 ? top - 1.0 : jf;
  const auto j = static_cast<std::size_t>(jf);
  const double frac = x - jf;
  return prefix[j] + (frac * da) * vals[j];
}

}  // namespace ldp::simd::detail
