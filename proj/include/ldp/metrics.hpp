#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldp/grid.hpp"
#include "ldp/measure.hpp"

namespace ldp {

struct MetricParams {
  double alpha = 0.25;
  double beta = 1.0;
  double beta0 = 0.25;
  double beta1 = 0.5;
  std::size_t m_max = 16;

  /// 0 < beta0 < beta1 < beta, alpha in (0, 1/2), m_max >= 8.
  void validate() const;
};

/// ||u||_{m,alpha,beta} = sup_i e^{-beta |y_i|} |u_i|
///                      + e^{-beta m} sup_{|y_i|,|y_j| <= m} |u_i - u_j| / |y_i - y_j|^alpha.
double holder_norm(std::span<const double> u, const Grid& grid, std::size_t m,
                   const MetricParams& params);

/// ||u||_m for m = 1..m_max (index 0 is m = 1).
std::vector<double> holder_profile(std::span<const double> u, const Grid& grid,
                                   const MetricParams& params);

/// d(u, v) = sum_{m=1}^{m_max} 2^{-m} min(||u - v||_m, 1); the omitted tail is at most 2^{-m_max}.
double metric_d(std::span<const double> u, std::span<const double> v, const Grid& grid,
                const MetricParams& params);

/// Stieltjes measure of a nondecreasing field: atoms at cell midpoints with masses u_{i+1} - u_i.
AtomMeasure xi_map(std::span<const double> u, const Grid& grid);

/// xi_map for a distribution function (u(-L) = 0, u(L) = 1 within 1e-6), renormalized to mass 1.
AtomMeasure psi_map(std::span<const double> u, const Grid& grid);

/// K with int rho = 1 for rho(x) = K exp(-1 / (1 - x^2)) on |x| < 1.
double mollifier_constant();
double mollifier(double x);

/// J_beta(x) = int e^{-beta |y|} rho(x - y) dy.
double mollified_weight(double beta, double x);

/// (c0, C0) = (min, max) of J_beta(x) e^{beta |x|} over x in [-x_max, x_max] (`points` samples).
std::pair<double, double> sandwich_constants(double beta, double x_max = 10.0,
                                             std::size_t points = 2001);

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
};

/// The 21 bounded test functions:
///   one: f = 1
///   poly1..poly3, legendre2: c, c^2, c^3, (3c^2 - 1)/2 with c = clamp(x / 4, -1, 1)
///   bump(c_j): exp(-(x - c_j)^2 / 2), c_j = -3.5, -2.5, ..., 3.5
///   step(c_j): (1 + tanh((x - c_j) / 0.5)) / 2, same centers
const std::vector<TestFunction>& test_dictionary();

/// sup over the dictionary of |int f e^{-beta|x|} d(mu - nu)|; a pseudometric.
double weak_metric(const AtomMeasure& mu, const AtomMeasure& nu, double beta);

}  // namespace ldp
