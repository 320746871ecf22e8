#include "ldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldp/error.hpp"
#include "ldp/metrics.hpp"

namespace ldp {

namespace {

// r_n = (w_{n+1} - w_n) / dt - w''_{n+1} / 2, the residual of the backward Euler heat step the
// solver takes, attached to the interval [t_n, t_{n+1}]. A free heat flow therefore has zero
// residual even from a discontinuous initial density. The last row repeats the one before it.
std::vector<std::vector<double>> heat_residual(const MeasurePath& path) {
  const std::size_t ns = path.steps();
  const std::size_t ny = path.grid.ny;
  const double dx = path.grid.dx();
  const double inv_dx2 = 1.0 / (dx * dx);
  const auto& w = path.density;
  std::vector<std::vector<double>> r(ns, std::vector<double>(ny));
  for (std::size_t n = 0; n + 1 < ns; ++n) {
    const double dt = path.times[n + 1] - path.times[n];
    const auto& next = w[n + 1];
    for (std::size_t i = 0; i < ny; ++i) {
      const double left = i == 0 ? next[1] : next[i - 1];
      const double right = i + 1 == ny ? next[ny - 2] : next[i + 1];
      const double wyy = (left - 2.0 * next[i] + right) * inv_dx2;
      r[n][i] = (next[i] - w[n][i]) / dt - 0.5 * wyy;
    }
  }
  r[ns - 1] = r[ns - 2];
  return r;
}

void check_density_path(const MeasurePath& path) {
  if (path.representation != MeasurePath::Representation::density) {
    throw ValidationError("rate: path must store densities");
  }
  if (path.steps() < 2) throw ValidationError("rate: path needs at least two time points");
  path.validate();
}

}  // namespace

RateReport rate_density(const MeasurePath& path, ModelKind kind, double floor) {
  check_density_path(path);
  if (!(floor > 0.0)) throw ValidationError("rate: density floor must be positive");
  const std::size_t ns = path.steps();
  const std::size_t ny = path.grid.ny;
  const double dx = path.grid.dx();
  const auto r = heat_residual(path);

  RateReport rep;
  rep.i_energy = std::numeric_limits<double>::quiet_NaN();
  rep.psi.assign(ns, std::vector<double>(ny));
  std::size_t floored = 0;
  double total = 0.0;
  for (std::size_t n = 0; n < ns; ++n) {
    double row = 0.0;
    double centre = 0.0;
    for (std::size_t i = 0; i < ny; ++i) {
      const double w = path.density[n][i];
      const double wf = std::max(w, floor);
      if (w < floor) ++floored;
      const double psi = r[n][i] / wf;
      rep.psi[n][i] = psi;
      const double wy = (i == 0 || i + 1 == ny) ? 0.0 : 1.0;
      row += wy * psi * psi * wf;
      centre += wy * psi * std::max(w, 0.0);
    }
    // Left-point rule over [t_n, t_{n+1}]; the last row carries no interval.
    if (n + 1 < ns) total += row * dx * (path.times[n + 1] - path.times[n]);
    if (kind == ModelKind::fvp) {
      rep.centering_residual.push_back(centre * dx);
      rep.max_centering_residual = std::max(rep.max_centering_residual, std::abs(centre * dx));
    }
  }
  rep.i_density = 0.5 * total;
  rep.floor_mass = static_cast<double>(floored) / static_cast<double>(ns * ny);
  rep.cm.psi_norm_sq = total;
  rep.cm.psi_square_integrable = std::isfinite(rep.cm.psi_norm_sq);
  return rep;
}

CameronMartinReport cameron_martin_check(const MeasurePath& path, std::span<const double> nu,
                                         double floor) {
  check_density_path(path);
  const std::size_t ns = path.steps();
  const std::size_t ny = path.grid.ny;
  if (nu.size() != ny) throw ValidationError("cameron_martin_check: reference size != ny");
  CameronMartinReport cm;

  double scale = 1.0;
  for (std::size_t i = 0; i < ny; ++i) {
    cm.initial_max_abs = std::max(cm.initial_max_abs, std::abs(path.density[0][i] - nu[i]));
    scale = std::max(scale, std::abs(nu[i]));
  }
  cm.initial_matches = cm.initial_max_abs <= 1e-9 * scale;

  std::vector<bool> flagged(ns, false);
  for (const auto& tf : test_dictionary()) {
    std::vector<double> d(ns - 1);
    double tv = 0.0;
    double prev = path.integrate(0, tf.f);
    for (std::size_t n = 0; n + 1 < ns; ++n) {
      const double next = path.integrate(n + 1, tf.f);
      d[n] = next - prev;
      tv += std::abs(d[n]);
      prev = next;
    }
    cm.max_total_variation = std::max(cm.max_total_variation, tv);
    for (std::size_t n = 0; n < d.size(); ++n) {
      double neighbours = 0.0;
      if (n > 0) neighbours = std::max(neighbours, std::abs(d[n - 1]));
      if (n + 1 < d.size()) neighbours = std::max(neighbours, std::abs(d[n + 1]));
      if (std::abs(d[n]) > 10.0 * neighbours && std::abs(d[n]) > 1e-8) flagged[n] = true;
    }
  }
  for (std::size_t n = 0; n < ns; ++n) {
    if (flagged[n]) cm.jump_steps.push_back(n);
  }
  cm.time_continuous = cm.jump_steps.empty();

  const auto r = heat_residual(path);
  const double cell = path.grid.dx() * (path.times[1] - path.times[0]);
  // Interior points only, as in the rate sums: a neumann end density is zero by construction.
  for (std::size_t n = 0; n < ns; ++n) {
    for (std::size_t i = 1; i + 1 < ny; ++i) {
      if (path.density[n][i] < floor && r[n][i] * r[n][i] / floor * cell > 1e-6) {
        if (cm.support_violations == 0) cm.support_witness = {{path.times[n], path.grid.y(i)}};
        ++cm.support_violations;
      }
    }
  }
  cm.support_ok = cm.support_violations == 0;

  const RateReport rep = rate_density(path, ModelKind::sbm, floor);
  cm.psi_norm_sq = rep.cm.psi_norm_sq;
  cm.psi_square_integrable = rep.cm.psi_square_integrable;
  return cm;
}

}  // namespace ldp
