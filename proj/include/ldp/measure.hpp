#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ldp/grid.hpp"

namespace ldp {

/// Finite list of weighted points.
struct AtomMeasure {
  std::vector<double> positions;
  std::vector<double> masses;

  double total_mass() const;
  double integrate(const std::function<double(double)>& f) const;
};

/// Discretized path t -> mu_t, either as grid densities or as atoms, one entry per time.
struct MeasurePath {
  enum class Representation { density, atoms };

  Grid grid;
  Representation representation = Representation::density;
  std::vector<double> times;
  std::vector<std::vector<double>> density;  // [step][i], density representation
  std::vector<AtomMeasure> atoms;            // [step], atom representation
  bool probability = false;                  // unit total mass per step

  std::size_t steps() const { return times.size(); }

  /// <mu_step, f>: trapezoid rule for densities, exact sum for atoms.
  double integrate(std::size_t step, const std::function<double(double)>& f) const;
  double total_mass(std::size_t step) const;

  /// Throws ValidationError on negative densities (below -1e-12 relative) or, for probability
  /// paths, total mass off 1 by more than 1e-6.
  void validate() const;
};

/// w_i = (u_{i+1} - u_{i-1}) / (2 dx). At the ends the ghost point follows the boundary
/// condition: neumann reflects u (so w = 0 there), dirichlet_pinned uses a one-sided difference.
/// For dirichlet_pinned the trapezoid integral of w is exactly u_{n-1} - u_0.
std::vector<double> density_from_cdf(std::span<const double> u, double dx, Boundary bc);

/// Density path of the measures whose distribution functions are the slices of `path`.
MeasurePath density_path(const PathField& path, bool probability);

/// Atom path; all entries share `grid` for time stamps.
MeasurePath atom_path(const Grid& grid, std::vector<double> times, std::vector<AtomMeasure> atoms,
                      bool probability);

}  // namespace ldp
