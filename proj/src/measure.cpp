#include "ldp/measure.hpp"

#include <algorithm>
#include <cmath>

#include "ldp/error.hpp"

namespace ldp {

double AtomMeasure::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

double AtomMeasure::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) s += masses[k] * f(positions[k]);
  return s;
}

double MeasurePath::integrate(std::size_t step, const std::function<double(double)>& f) const {
  if (representation == Representation::atoms) return atoms.at(step).integrate(f);
  const auto& w = density.at(step);
  std::vector<double> fw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) fw[i] = w[i] * f(grid.y(i));
  return trapezoid(fw, grid.dx());
}

double MeasurePath::total_mass(std::size_t step) const {
  if (representation == Representation::atoms) return atoms.at(step).total_mass();
  return trapezoid(density.at(step), grid.dx());
}

void MeasurePath::validate() const {
  const std::size_t n = steps();
  if (representation == Representation::density) {
    if (density.size() != n) throw ValidationError("measure path: density count != time count");
    for (std::size_t s = 0; s < n; ++s) {
      const auto& w = density[s];
      if (w.size() != grid.ny) throw ValidationError("measure path: density size != ny");
      double scale = 1.0;
      for (double v : w) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] < -1e-12 * scale) {
          throw ValidationError("measure path: negative density at step " + std::to_string(s) +
                                ", y = " + std::to_string(grid.y(i)));
        }
      }
    }
  } else {
    if (atoms.size() != n) throw ValidationError("measure path: atom count != time count");
    for (const auto& a : atoms) {
      if (a.positions.size() != a.masses.size()) throw ValidationError("measure path: atom sizes");
      for (double m : a.masses) {
        if (!(m >= 0.0)) throw ValidationError("measure path: negative atom mass");
      }
    }
  }
  if (probability) {
    for (std::size_t s = 0; s < n; ++s) {
      if (std::abs(total_mass(s) - 1.0) > 1e-6) {
        throw ValidationError("measure path: probability path has mass " +
                              std::to_string(total_mass(s)) + " at step " + std::to_string(s));
      }
    }
  }
}

std::vector<double> density_from_cdf(std::span<const double> u, double dx, Boundary bc) {
  const std::size_t n = u.size();
  if (n < 2) throw ValidationError("density_from_cdf: need at least two points");
  std::vector<double> w(n);
  if (bc == Boundary::neumann) {
    // Centered difference against the reflected ghost point.
    w[0] = 0.0;
    w[n - 1] = 0.0;
  } else {
    w[0] = (u[1] - u[0]) / dx;
    w[n - 1] = (u[n - 1] - u[n - 2]) / dx;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
  return w;
}

MeasurePath density_path(const PathField& path, bool probability) {
  MeasurePath mp;
  mp.grid = path.grid;
  mp.representation = MeasurePath::Representation::density;
  mp.probability = probability;
  mp.times.reserve(path.slices.size());
  mp.density.reserve(path.slices.size());
  for (const auto& f : path.slices) {
    mp.times.push_back(f.t);
    mp.density.push_back(density_from_cdf(f.values, path.grid.dx(), path.grid.bc));
  }
  return mp;
}

MeasurePath atom_path(const Grid& grid, std::vector<double> times, std::vector<AtomMeasure> atoms,
                      bool probability) {
  MeasurePath mp;
  mp.grid = grid;
  mp.representation = MeasurePath::Representation::atoms;
  mp.times = std::move(times);
  mp.atoms = std::move(atoms);
  mp.probability = probability;
  return mp;
}

}  // namespace ldp
