#include "ldp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ldp/error.hpp"
#include "ldp/simd.hpp"

namespace ldp {

void MetricParams::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ValidationError("metric: alpha must lie in (0, 1/2)");
  if (!(0.0 < beta0 && beta0 < beta1 && beta1 < beta)) {
    throw ValidationError("metric: need 0 < beta0 < beta1 < beta");
  }
  if (m_max < 8) throw ValidationError("metric: m_max must be at least 8");
}

namespace {

// Index range [lo, hi] of grid points with |y| <= m.
std::pair<std::size_t, std::size_t> window(const Grid& grid, double m) {
  const double dx = grid.dx();
  const double reach = std::min(m, grid.L);
  const auto half = static_cast<std::size_t>(std::floor(reach / dx + 1e-9));
  const std::size_t centre = (grid.ny - 1) / 2;
  const std::size_t lo = centre >= half ? centre - half : 0;
  const std::size_t hi = std::min(grid.ny - 1, (grid.ny - 1) - lo);
  return {lo, hi};
}

double weighted_sup(std::span<const double> u, const Grid& grid, double beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s = std::max(s, std::exp(-beta * std::abs(grid.y(i))) * std::abs(u[i]));
  }
  return s;
}

// sup over pairs in [lo, hi] of |u_i - u_j| / |y_i - y_j|^alpha.
double holder_sup(std::span<const double> u, std::size_t lo, std::size_t hi, double dx,
                  double alpha) {
  if (hi <= lo) return 0.0;
  const auto sub = u.subspan(lo, hi - lo + 1);
  double s = 0.0;
  for (std::size_t d = 1; d < sub.size(); ++d) {
    const double w = std::pow(static_cast<double>(d) * dx, -alpha);
    s = std::max(s, w * simd::max_abs_lag_diff(sub, d));
  }
  return s;
}

void check_size(std::span<const double> u, const Grid& grid, const char* what) {
  if (u.size() != grid.ny) throw ValidationError(std::string(what) + ": field size != ny");
}

}  // namespace

double holder_norm(std::span<const double> u, const Grid& grid, std::size_t m,
                   const MetricParams& params) {
  check_size(u, grid, "holder_norm");
  if (m < 1) throw ValidationError("holder_norm: m must be at least 1");
  const auto [lo, hi] = window(grid, static_cast<double>(m));
  return weighted_sup(u, grid, params.beta) +
         std::exp(-params.beta * static_cast<double>(m)) *
             holder_sup(u, lo, hi, grid.dx(), params.alpha);
}

std::vector<double> holder_profile(std::span<const double> u, const Grid& grid,
                                   const MetricParams& params) {
  check_size(u, grid, "holder_profile");
  const double first = weighted_sup(u, grid, params.beta);
  std::map<std::pair<std::size_t, std::size_t>, double> cache;
  std::vector<double> out(params.m_max);
  for (std::size_t m = 1; m <= params.m_max; ++m) {
    const auto key = window(grid, static_cast<double>(m));
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, holder_sup(u, key.first, key.second, grid.dx(), params.alpha)).first;
    }
    out[m - 1] = first + std::exp(-params.beta * static_cast<double>(m)) * it->second;
  }
  return out;
}

double metric_d(std::span<const double> u, std::span<const double> v, const Grid& grid,
                const MetricParams& params) {
  check_size(u, grid, "metric_d");
  check_size(v, grid, "metric_d");
  std::vector<double> diff(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];
  const auto norms = holder_profile(diff, grid, params);
  double d = 0.0;
  for (std::size_t m = 1; m <= params.m_max; ++m) {
    d += std::ldexp(std::min(norms[m - 1], 1.0), -static_cast<int>(m));
  }
  return d;
}

AtomMeasure xi_map(std::span<const double> u, const Grid& grid) {
  check_size(u, grid, "xi_map");
  double scale = 1.0;
  for (double x : u) scale = std::max(scale, std::abs(x));
  AtomMeasure mu;
  mu.positions.resize(grid.ny - 1);
  mu.masses.resize(grid.ny - 1);
  const double dx = grid.dx();
  for (std::size_t i = 0; i + 1 < grid.ny; ++i) {
    const double m = u[i + 1] - u[i];
    if (m < -1e-12 * scale) {
      throw ValidationError("xi_map: field decreases at y = " + std::to_string(grid.y(i)));
    }
    mu.positions[i] = grid.y(i) + 0.5 * dx;
    mu.masses[i] = std::max(m, 0.0);
  }
  return mu;
}

AtomMeasure psi_map(std::span<const double> u, const Grid& grid) {
  check_size(u, grid, "psi_map");
  if (std::abs(u.front()) > 1e-6 || std::abs(u.back() - 1.0) > 1e-6) {
    throw ValidationError("psi_map: distribution function must run from 0 to 1");
  }
  AtomMeasure mu = xi_map(u, grid);
  const double total = mu.total_mass();
  if (!(total > 0.0)) throw ValidationError("psi_map: zero total mass");
  for (double& m : mu.masses) m /= total;
  return mu;
}

namespace {

double bump_core(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

}  // namespace

double mollifier_constant() {
  static const double K = [] {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return 1.0 / integrator.integrate(bump_core, -1.0, 1.0);
  }();
  return K;
}

double mollifier(double x) { return mollifier_constant() * bump_core(x); }

double mollified_weight(double beta, double x) {
  if (!(beta >= 0.0)) throw DomainError("mollified_weight: beta must be >= 0");
  // Substituting s = x - y: int_{-1}^{1} rho(s) e^{-beta |x - s|} ds, kink at s = x.
  const auto f = [&](double s) { return mollifier(s) * std::exp(-beta * std::abs(x - s)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (x <= -1.0 || x >= 1.0) return GK::integrate(f, -1.0, 1.0, 10, 1e-13);
  return GK::integrate(f, -1.0, x, 10, 1e-13) + GK::integrate(f, x, 1.0, 10, 1e-13);
}

std::pair<double, double> sandwich_constants(double beta, double x_max, std::size_t points) {
  if (points < 2) throw ValidationError("sandwich_constants: need at least two points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = -x_max + 2.0 * x_max * static_cast<double>(k) / static_cast<double>(points - 1);
    const double r = mollified_weight(beta, x) * std::exp(beta * std::abs(x));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

const std::vector<TestFunction>& test_dictionary() {
  static const std::vector<TestFunction> dict = [] {
    std::vector<TestFunction> d;
    const auto c = [](double x) { return std::clamp(x / 4.0, -1.0, 1.0); };
    d.push_back({"one", [](double) { return 1.0; }});
    d.push_back({"poly1", [c](double x) { return c(x); }});
    d.push_back({"poly2", [c](double x) { return c(x) * c(x); }});
    d.push_back({"poly3", [c](double x) { return c(x) * c(x) * c(x); }});
    d.push_back({"legendre2", [c](double x) { return 0.5 * (3.0 * c(x) * c(x) - 1.0); }});
    for (int j = 0; j < 8; ++j) {
      const double centre = -3.5 + j;
      d.push_back({"bump(" + std::to_string(centre).substr(0, 4) + ")",
                   [centre](double x) { return std::exp(-0.5 * (x - centre) * (x - centre)); }});
    }
    for (int j = 0; j < 8; ++j) {
      const double centre = -3.5 + j;
      d.push_back({"step(" + std::to_string(centre).substr(0, 4) + ")",
                   [centre](double x) { return 0.5 * (1.0 + std::tanh((x - centre) / 0.5)); }});
    }
    return d;
  }();
  return dict;
}

double weak_metric(const AtomMeasure& mu, const AtomMeasure& nu, double beta) {
  double best = 0.0;
  for (const auto& tf : test_dictionary()) {
    const auto g = [&](double x) { return tf.f(x) * std::exp(-beta * std::abs(x)); };
    best = std::max(best, std::abs(mu.integrate(g) - nu.integrate(g)));
  }
  return best;
}

}  // namespace ldp
