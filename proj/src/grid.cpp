#include "ldp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldp/error.hpp"

namespace ldp {

Boundary parse_boundary(const std::string& name) {
  if (name == "neumann") return Boundary::neumann;
  if (name == "dirichlet_pinned" || name == "dirichlet") return Boundary::dirichlet_pinned;
  throw ValidationError("unknown boundary condition '" + name + "'");
}

std::string to_string(Boundary bc) {
  return bc == Boundary::neumann ? "neumann" : "dirichlet_pinned";
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> ys(ny);
  for (std::size_t i = 0; i < ny; ++i) ys[i] = y(i);
  return ys;
}

void Grid::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid: L must be positive");
  if (ny < 3) throw ValidationError("grid: ny must be at least 3");
  if (nt < 1) throw ValidationError("grid: nt must be at least 1");
  if (na < 1) throw ValidationError("grid: na must be at least 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("grid: T must be positive");
  if (!(a_min < a_max)) throw ValidationError("grid: a_min must be below a_max");
}

void Grid::check_noise_gate() const {
  if (dt() > dx()) {
    throw ValidationError("grid: dt = " + std::to_string(dt()) + " exceeds dx = " +
                          std::to_string(dx()) + " (noise quality gate)");
  }
}

std::size_t Grid::points_for_spacing(double L, double dx) {
  if (!(dx > 0.0)) throw ValidationError("grid: dx must be positive");
  return static_cast<std::size_t>(std::llround(2.0 * L / dx)) + 1;
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.L == b.L && a.ny == b.ny && a.T == b.T && a.nt == b.nt && a.a_min == b.a_min &&
         a.a_max == b.a_max && a.na == b.na && a.bc == b.bc;
}

void check_field(const Grid& grid, std::span<const double> values, const char* what) {
  if (values.size() != grid.ny) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(grid.ny) +
                          " values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at index " +
                            std::to_string(i));
    }
  }
}

double heat_kernel(double t, double x) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

double trapezoid(std::span<const double> values, double dx) {
  if (values.empty()) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dx;
}

Field heat_flow_exact(const Grid& grid, const Field& F, double t) {
  check_field(grid, F.values, "heat_flow_exact");
  if (t < 0.0) throw DomainError("heat_flow_exact: t must be non-negative");
  Field out{F.values, F.t + t};
  if (t == 0.0) return out;
  const double dx = grid.dx();
  const std::size_t n = grid.ny;
  std::vector<double> kernel(n);
  // p_t(y_i - y_j) depends only on |i - j| on a uniform grid.
  for (std::size_t d = 0; d < n; ++d) kernel[d] = heat_kernel(t, static_cast<double>(d) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
      s += w * kernel[i > j ? i - j : j - i] * F.values[j];
    }
    out.values[i] = s * dx;
  }
  return out;
}

namespace {

void factor(const std::vector<double>& lower, const std::vector<double>& diag,
            const std::vector<double>& upper, std::vector<double>& c_prime,
            std::vector<double>& denom) {
  const std::size_t n = diag.size();
  c_prime.assign(n, 0.0);
  denom.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = i == 0 ? diag[0] : diag[i] - lower[i] * c_prime[i - 1];
    if (!std::isfinite(d) || std::abs(d) < 1e-300) {
      throw NumericalError("heat step: singular tridiagonal system at row " + std::to_string(i));
    }
    denom[i] = d;
    c_prime[i] = i + 1 < n ? upper[i] / d : 0.0;
  }
}

void solve(const std::vector<double>& lower, const std::vector<double>& c_prime,
           const std::vector<double>& denom, std::span<double> x) {
  const std::size_t n = denom.size();
  x[0] = x[0] / denom[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower[i] * x[i - 1]) / denom[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
}

}  // namespace

HeatStepper::HeatStepper(const Grid& grid, double dt) : dt_(dt) {
  grid.validate();
  if (!(dt > 0.0)) throw DomainError("heat step: dt must be positive");
  const std::size_t n = grid.ny;
  const double r = 0.5 * dt / (grid.dx() * grid.dx());
  lower_.assign(n, -r);
  diag_.assign(n, 1.0 + 2.0 * r);
  upper_.assign(n, -r);
  lower_[0] = 0.0;
  upper_[n - 1] = 0.0;
  if (grid.bc == Boundary::neumann) {
    // Ghost-point reflection: u_{-1} = u_1, u_{n} = u_{n-2}.
    upper_[0] = -2.0 * r;
    lower_[n - 1] = -2.0 * r;
  } else {
    diag_[0] = 1.0;
    upper_[0] = 0.0;
    diag_[n - 1] = 1.0;
    lower_[n - 1] = 0.0;
  }
  factor(lower_, diag_, upper_, c_prime_, denom_);

  lower_t_.assign(n, 0.0);
  std::vector<double> upper_t(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) lower_t_[i] = upper_[i - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) upper_t[i] = lower_[i + 1];
  factor(lower_t_, diag_, upper_t, ct_prime_, denom_t_);
}

void HeatStepper::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size() || out.size() != size()) {
    throw ValidationError("heat step: field size does not match the grid");
  }
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  solve(lower_, c_prime_, denom_, out);
}

void HeatStepper::apply_in_place(std::span<double> u) const { apply(u, u); }

void HeatStepper::apply_transpose_in_place(std::span<double> u) const {
  if (u.size() != size()) throw ValidationError("heat step: field size does not match the grid");
  solve(lower_t_, ct_prime_, denom_t_, u);
}

Field HeatStepper::step(const Field& u) const {
  Field out{u.values, u.t + dt_};
  apply_in_place(out.values);
  return out;
}

}  // namespace ldp
