#include <cmath>
#include <cstdlib>
#include <string>

#include "ldp/error.hpp"
#include "ldp/simd.hpp"

namespace ldp::simd {

#if defined(LDP_HAVE_AVX2)
namespace avx2_impl {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(LDP_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &avx2_impl::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("LDP_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

void cumulative_lookup(std::span<const double> u, std::span<double> out,
                       std::span<const double> prefix, std::span<const double> vals, double a_min,
                       double da) {
  if (out.size() != u.size() || vals.empty() || prefix.size() != vals.size() + 1) {
    throw ValidationError("cumulative_lookup: inconsistent sizes");
  }
  active().cumulative_lookup(u.data(), out.data(), u.size(), prefix.data(), vals.data(),
                             vals.size(), a_min, 1.0 / da, da);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw ValidationError("axpy: size mismatch");
  active().axpy(a, x.data(), y.data(), x.size());
}

double weighted_max_abs_diff(std::span<const double> u, std::span<const double> v,
                             std::span<const double> w) {
  if (u.size() != v.size() || u.size() != w.size()) {
    throw ValidationError("weighted_max_abs_diff: size mismatch");
  }
  return active().weighted_max_abs_diff(u.data(), v.data(), w.data(), u.size());
}

double max_abs_lag_diff(std::span<const double> u, std::size_t lag) {
  return active().max_abs_lag_diff(u.data(), u.size(), lag);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("dot: size mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

}  // namespace ldp::simd
