#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldp/error.hpp"
#include "ldp/grid.hpp"

using namespace ldp;

namespace {

Grid heat_grid(double dx, std::size_t nt, Boundary bc = Boundary::neumann) {
  Grid g;
  g.L = 8.0;
  g.ny = Grid::points_for_spacing(g.L, dx);
  g.nt = nt;
  g.bc = bc;
  return g;
}

Field gaussian(const Grid& g, double var) {
  Field f{std::vector<double>(g.ny), 0.0};
  for (std::size_t i = 0; i < g.ny; ++i) {
    f[i] = std::exp(-0.5 * g.y(i) * g.y(i) / var) / std::sqrt(2.0 * std::numbers::pi * var);
  }
  return f;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double stepped_error(double dx, std::size_t nt) {
  const Grid g = heat_grid(dx, nt);
  HeatStepper heat(g, g.dt());
  Field u = gaussian(g, 1.0);
  for (std::size_t n = 0; n < nt; ++n) heat.apply_in_place(u.values);
  return max_abs_diff(u, gaussian(g, 2.0));
}

}  // namespace

TEST_CASE("heat kernel closed form") {
  CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  CHECK(heat_kernel(0.5, 1.0) == doctest::Approx(0.2075537487).epsilon(1e-10));
  for (double x : {0.1, 0.7, 2.5}) CHECK(heat_kernel(0.3, x) == heat_kernel(0.3, -x));
  CHECK_THROWS_AS(heat_kernel(0.0, 1.0), DomainError);
}

TEST_CASE("exact heat flow") {
  const Grid g = heat_grid(0.05, 1000);
  const Field f = gaussian(g, 1.0);
  const Field same = heat_flow_exact(g, f, 0.0);
  CHECK(same.values == f.values);

  CHECK(max_abs_diff(heat_flow_exact(g, f, 1.0), gaussian(g, 2.0)) <= 1e-4);

  const Field c{std::vector<double>(g.ny, 0.7), 0.0};
  const Field flowed = heat_flow_exact(g, c, 1.0);
  // Truncation to [-L, L] removes kernel mass only near the ends.
  for (std::size_t i = 0; i < g.ny; ++i) {
    if (std::abs(g.y(i)) <= 2.0) CHECK(std::abs(flowed[i] - 0.7) <= 1e-6);
  }
}

TEST_CASE("implicit heat step") {
  SUBCASE("constant under neumann is exact") {
    const Grid g = heat_grid(0.05, 100);
    HeatStepper heat(g, g.dt());
    std::vector<double> u(g.ny, 3.25);
    heat.apply_in_place(u);
    for (double v : u) CHECK(v == doctest::Approx(3.25).epsilon(1e-15));
  }
  SUBCASE("pinned ramp is a fixed point") {
    Grid g = heat_grid(0.05, 100, Boundary::dirichlet_pinned);
    HeatStepper heat(g, g.dt());
    std::vector<double> u(g.ny);
    for (std::size_t i = 0; i < g.ny; ++i) u[i] = static_cast<double>(i) / static_cast<double>(g.ny - 1);
    const std::vector<double> before = u;
    heat.apply_in_place(u);
    for (std::size_t i = 0; i < g.ny; ++i) CHECK(std::abs(u[i] - before[i]) <= 1e-14);
  }
  SUBCASE("gaussian after 1000 steps") {
    CHECK(stepped_error(0.05, 1000) <= 2e-3);
  }
  SUBCASE("refinement halves the error") {
    const double coarse = stepped_error(0.1, 500);
    const double fine = stepped_error(0.05, 1000);
    CHECK(coarse / fine >= 1.8);
  }
}

TEST_CASE("heat step invariants") {
  const Grid g = heat_grid(0.05, 1000);
  HeatStepper heat(g, g.dt());
  std::vector<double> u(g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) u[i] = std::sin(3.0 * g.y(i)) + 0.2 * std::cos(11.0 * g.y(i)) + 1.0;
  // Neumann ghost reflection conserves the trapezoid integral.
  for (int step = 0; step < 20; ++step) {
    const double before = trapezoid(u, g.dx());
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    const double mn = *lo, mx = *hi;
    heat.apply_in_place(u);
    CHECK(std::abs(trapezoid(u, g.dx()) - before) <= 1e-12 * std::abs(before));
    CHECK(*std::max_element(u.begin(), u.end()) <= mx + 1e-15);
    CHECK(*std::min_element(u.begin(), u.end()) >= mn - 1e-15);
  }
}

TEST_CASE("transpose solve is the adjoint") {
  Grid g = heat_grid(0.25, 10, Boundary::neumann);
  for (Boundary bc : {Boundary::neumann, Boundary::dirichlet_pinned}) {
    g.bc = bc;
    HeatStepper heat(g, 0.01);
    std::vector<double> x(g.ny), y(g.ny);
    for (std::size_t i = 0; i < g.ny; ++i) {
      x[i] = std::sin(0.3 * static_cast<double>(i));
      y[i] = std::cos(0.7 * static_cast<double>(i));
    }
    std::vector<double> ax = x, aty = y;
    heat.apply_in_place(ax);
    heat.apply_transpose_in_place(aty);
    double l = 0.0, r = 0.0;
    for (std::size_t i = 0; i < g.ny; ++i) {
      l += ax[i] * y[i];
      r += x[i] * aty[i];
    }
    CHECK(l == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("grid validation") {
  Grid g;
  CHECK_NOTHROW(g.validate());
  CHECK(g.ny == 321);
  CHECK(g.dx() == doctest::Approx(0.05));
  g.ny = 2;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = Grid{};
  g.a_max = g.a_min;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = Grid{};
  g.nt = 10;  // dt = 0.1 > dx
  CHECK_THROWS_AS(g.check_noise_gate(), ValidationError);
  CHECK_THROWS_AS(parse_boundary("periodic"), ValidationError);
  CHECK(parse_boundary(to_string(Boundary::dirichlet_pinned)) == Boundary::dirichlet_pinned);
}
