#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ldp/grid.hpp"

namespace ldp {

/// LDP control h[step][cell] on the time x noise grid; h[n] acts on [t_n, t_{n+1}).
struct Control {
  std::size_t nt = 0;
  std::size_t na = 0;
  double dt = 0.0;
  double da = 0.0;
  std::vector<double> values;  // row-major, nt * na

  Control() = default;
  explicit Control(const Grid& grid)
      : nt(grid.nt), na(grid.na), dt(grid.dt()), da(grid.da()), values(grid.nt * grid.na, 0.0) {}

  double& at(std::size_t step, std::size_t cell) { return values[step * na + cell]; }
  double at(std::size_t step, std::size_t cell) const { return values[step * na + cell]; }
  std::span<const double> row(std::size_t step) const { return {values.data() + step * na, na}; }
  std::span<double> row(std::size_t step) { return {values.data() + step * na, na}; }

  /// Throws ValidationError unless the shape and spacings match the grid and entries are finite.
  void check(const Grid& grid) const;
};

/// h[n][k] = f(t_n, a_mid(k)).
Control sample_control(const Grid& grid, const std::function<double(double t, double a)>& f);

/// (1/2) sum h^2 dt da.
double control_energy(const Control& h);

/// h[n][k] = k[n][k] / sqrt(da) for the normalized-indicator basis.
Control zeta(std::span<const double> k, const Grid& grid);
std::vector<double> zeta_inverse(const Control& h);

/// Subtracts the per-step a-mean (fvp noise space [0, 1]).
Control center_control_fv(const Control& h);

}  // namespace ldp
