#include "ldp/control.hpp"

#include <cmath>

#include "ldp/error.hpp"

namespace ldp {

void Control::check(const Grid& grid) const {
  if (nt != grid.nt || na != grid.na || values.size() != nt * na) {
    throw ValidationError("control: shape does not match the (time x noise) grid");
  }
  if (std::abs(dt - grid.dt()) > 1e-15 * grid.T || std::abs(da - grid.da()) > 1e-15 * (grid.a_max - grid.a_min)) {
    throw ValidationError("control: spacings do not match the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("control: non-finite entry");
  }
}

Control sample_control(const Grid& grid, const std::function<double(double, double)>& f) {
  Control h(grid);
  for (std::size_t n = 0; n < grid.nt; ++n) {
    for (std::size_t k = 0; k < grid.na; ++k) h.at(n, k) = f(grid.t(n), grid.a_mid(k));
  }
  return h;
}

double control_energy(const Control& h) {
  double s = 0.0;
  for (double v : h.values) s += v * v;
  return 0.5 * s * h.dt * h.da;
}

Control zeta(std::span<const double> k, const Grid& grid) {
  if (k.size() != grid.nt * grid.na) throw ValidationError("zeta: expected nt * na coefficients");
  Control h(grid);
  const double s = 1.0 / std::sqrt(grid.da());
  for (std::size_t i = 0; i < k.size(); ++i) h.values[i] = k[i] * s;
  return h;
}

std::vector<double> zeta_inverse(const Control& h) {
  std::vector<double> k(h.values);
  const double s = std::sqrt(h.da);
  for (double& v : k) v *= s;
  return k;
}

Control center_control_fv(const Control& h) {
  Control out = h;
  for (std::size_t n = 0; n < h.nt; ++n) {
    auto r = out.row(n);
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(h.na);
    for (double& v : r) v -= mean;
  }
  return out;
}

}  // namespace ldp
