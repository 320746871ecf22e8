#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ldp {

enum class Boundary {
  neumann,           // zero flux; used for SBM distribution functions
  dirichlet_pinned,  // u(-L) = 0, u(L) = 1; used for FVP distribution functions
};

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary bc);

/// Truncated discretization of space [-L, L], time [0, T] and noise space [a_min, a_max].
///
/// All spacings are uniform. The implicit heat step needs no CFL condition;
/// `check_noise_gate` enforces dt <= dx before any stochastic term is added.
struct Grid {
  double L = 8.0;
  std::size_t ny = 321;
  double T = 1.0;
  std::size_t nt = 1000;
  double a_min = 0.0;
  double a_max = 1.0;
  std::size_t na = 64;
  Boundary bc = Boundary::neumann;

  double dx() const { return 2.0 * L / static_cast<double>(ny - 1); }
  double dt() const { return T / static_cast<double>(nt); }
  double da() const { return (a_max - a_min) / static_cast<double>(na); }

  double y(std::size_t i) const { return -L + static_cast<double>(i) * dx(); }
  double t(std::size_t step) const { return static_cast<double>(step) * dt(); }
  double a_edge(std::size_t k) const { return a_min + static_cast<double>(k) * da(); }
  double a_mid(std::size_t k) const { return a_min + (static_cast<double>(k) + 0.5) * da(); }

  std::vector<double> coordinates() const;

  /// Throws ValidationError unless dx, dt, da > 0, ny >= 3, nt >= 1, na >= 1, a_min < a_max.
  void validate() const;

  /// Throws ValidationError when dt > dx.
  void check_noise_gate() const;

  /// ny chosen so that the spacing is as close as possible to `dx`.
  static std::size_t points_for_spacing(double L, double dx);
};

bool same_grid(const Grid& a, const Grid& b);

/// A spatial slice u_t(.) sampled on the grid points.
struct Field {
  std::vector<double> values;
  double t = 0.0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Full time-indexed solution: slices at 0, dt, ..., T.
struct PathField {
  Grid grid;
  std::vector<Field> slices;

  const Field& at(std::size_t step) const { return slices.at(step); }
  const Field& terminal() const { return slices.back(); }
};

/// Throws ValidationError unless the field has ny finite values.
void check_field(const Grid& grid, std::span<const double> values, const char* what);

/// Gaussian density with variance t. Throws DomainError for t <= 0.
double heat_kernel(double t, double x);

/// Trapezoidal quadrature of the heat-kernel convolution of sampled F, truncated to [-L, L].
Field heat_flow_exact(const Grid& grid, const Field& F, double t);

/// Trapezoidal integral of sampled values over [-L, L].
double trapezoid(std::span<const double> values, double dx);

/// One backward-Euler step of du/dt = (1/2) u'' with the grid's boundary condition:
/// solves (I - dt/2 L) u_next = u with L the (1, -2, 1)/dx^2 stencil. The Thomas
/// factorization is computed once per (grid, dt).
class HeatStepper {
 public:
  HeatStepper(const Grid& grid, double dt);

  void apply(std::span<const double> in, std::span<double> out) const;
  void apply_in_place(std::span<double> u) const;

  /// Solves the transposed system; the adjoint of `apply`.
  void apply_transpose_in_place(std::span<double> u) const;

  Field step(const Field& u) const;

  std::size_t size() const { return lower_.size(); }
  double dt() const { return dt_; }

 private:
  double dt_;
  // A = tridiag(lower_, diag_, upper_); lower_[0] and upper_[n-1] are unused.
  std::vector<double> lower_, diag_, upper_;
  // Forward-elimination factors.
  std::vector<double> c_prime_, denom_;
  // Same for the transpose.
  std::vector<double> lower_t_, ct_prime_, denom_t_;
};

}  // namespace ldp
