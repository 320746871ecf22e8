#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/models.hpp"
#include "ldp/noise.hpp"
#include "ldp/solver.hpp"
#include "ldp/stats.hpp"

using namespace ldp;

namespace {

// Sample covariance of paired draws and its CLT standard error.
std::pair<double, double> covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = stats::mean(x), my = stats::mean(y);
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return {stats::mean(prod), stats::std_error(prod)};
}

}  // namespace

TEST_CASE("noise streams are deterministic and addressable") {
  const NoiseStream a(42, 7), b(42, 7), c(42, 8);
  CHECK(sample_step_noise(a, 3, 64) == sample_step_noise(b, 3, 64));
  CHECK(sample_step_noise(a, 3, 64) != sample_step_noise(c, 3, 64));
  CHECK(sample_step_noise(a, 3, 64) != sample_step_noise(a, 4, 64));
  const std::vector<double> row = sample_step_noise(a, 5, 9);
  for (std::size_t k = 0; k < row.size(); ++k) CHECK(a.normal(5, k) == row[k]);
  double z0 = 0.0, z1 = 0.0;
  a.normal_pair(5, 2, z0, z1);
  CHECK(z0 == row[4]);
  CHECK(z1 == row[5]);
}

TEST_CASE("standard normal moments over a million draws") {
  const NoiseStream s(1, 0);
  std::vector<double> draws;
  draws.reserve(1000000);
  for (std::size_t step = 0; step < 1000; ++step) {
    const std::vector<double> row = sample_step_noise(s, step, 1000);
    draws.insert(draws.end(), row.begin(), row.end());
  }
  CHECK(std::abs(stats::mean(draws)) <= 0.004);
  CHECK(std::abs(stats::variance(draws) - 1.0) <= 0.005);
}

TEST_CASE("distinct realizations are uncorrelated") {
  std::vector<double> x, y;
  for (std::size_t r = 0; r < 20000; ++r) {
    x.push_back(NoiseStream(3, r).normal(0, 0));
    y.push_back(NoiseStream(3, r + 1000000).normal(0, 0));
  }
  const auto [c, se] = covariance(x, y);
  CHECK(std::abs(c) <= 4.0 * se);
}

TEST_CASE("increment covariance matches the analytic cross product") {
  Grid g;
  g.L = 1.0;
  g.ny = 3;
  g.nt = 1000;
  g.na = 64;
  SUBCASE("fvp at u = 0.5") {
    ModelSpec m;
    m.kind = ModelKind::fvp;
    const std::vector<double> u{0.0, 0.5, 0.5};
    std::vector<double> x, y;
    for (std::size_t step = 0; step < 100000; ++step) {
      const auto inc = stochastic_increment(m, g, u, sample_step_noise(NoiseStream(9, 0), step, g.na));
      x.push_back(inc[1] / std::sqrt(g.dt()));
      y.push_back(inc[2] / std::sqrt(g.dt()));
    }
    const auto [c, se] = covariance(x, y);
    CHECK(std::abs(c - 0.25) <= 4.0 * se);
    CHECK(g_cross(m, 0.5, 0.5) == 0.25);
  }
  SUBCASE("sbm at u = 1 and 2") {
    g.a_min = -3.0;
    g.a_max = 3.0;
    g.na = 60;
    ModelSpec m;
    m.kind = ModelKind::sbm;
    m.a_min = g.a_min;
    m.a_max = g.a_max;
    const std::vector<double> u{0.0, 1.0, 2.0};
    std::vector<double> x, y;
    for (std::size_t step = 0; step < 100000; ++step) {
      const auto inc = stochastic_increment(m, g, u, sample_step_noise(NoiseStream(9, 1), step, g.na));
      CHECK(inc[0] == 0.0);
      x.push_back(inc[1] / std::sqrt(g.dt()));
      y.push_back(inc[2] / std::sqrt(g.dt()));
    }
    const auto [c, se] = covariance(x, y);
    CHECK(std::abs(c - 1.0) <= 4.0 * se);
  }
  SUBCASE("fvp at u = 0 gives no increment") {
    ModelSpec m;
    m.kind = ModelKind::fvp;
    const std::vector<double> u{0.0, 0.0, 0.0};
    const auto inc = stochastic_increment(m, g, u, sample_step_noise(NoiseStream(1, 1), 0, g.na));
    for (double v : inc) CHECK(v == 0.0);
  }
}

TEST_CASE("brownian basis") {
  const std::size_t nt = 50;
  const double dt = 1.0 / static_cast<double>(nt);
  std::vector<double> b1, b2;
  for (std::size_t r = 0; r < 10000; ++r) {
    const NoiseStream s(5, r);
    const auto p1 = brownian_basis(s, 1, nt, dt);
    const auto p2 = brownian_basis(s, 2, nt, dt);
    REQUIRE(p1.size() == nt + 1);
    CHECK(p1[0] == 0.0);
    b1.push_back(p1.back());
    b2.push_back(p2.back());
  }
  CHECK(std::abs(stats::variance(b1) - 1.0) <= 3.0 * stats::variance_std_error(b1));
  const auto [c, se] = covariance(b1, b2);
  CHECK(std::abs(c) <= 4.0 * se);
}

TEST_CASE("sub-cell bridge restores pointwise variance") {
  // dx = 1 and dt = 1e-4 make the heat step nearly the identity, so one step isolates the
  // noise term. Noise cells have width 1, much coarser than the field values.
  Grid g;
  g.L = 2.0;
  g.ny = 5;
  g.T = 1e-4;
  g.nt = 1;
  g.na = 3;
  g.a_min = -1.5;
  g.a_max = 1.5;
  ModelSpec m;
  m.kind = ModelKind::sbm;
  m.initial = parse_initial_datum("lebesgue(-1,0.55)");
  m.a_min = g.a_min;
  m.a_max = g.a_max;
  const Field u0 = initial_field(m, g);
  REQUIRE(u0[1] == -1.0);
  REQUIRE(u0[3] == 0.55);

  const auto run = [&](NoiseRefinement mode) {
    SpdeSolver solver(m, g, mode);
    std::vector<double> lo, hi;
    for (std::size_t r = 0; r < 20000; ++r) {
      const NoiseStream s(11, r);
      solver.run(1.0, nullptr, &s, [&](std::size_t step, std::span<const double> u) {
        if (step == 1) {
          lo.push_back((u[1] - u0[1]) / std::sqrt(g.dt()));
          hi.push_back((u[3] - u0[3]) / std::sqrt(g.dt()));
        }
      });
    }
    return std::make_pair(lo, hi);
  };
  const auto [lo, hi] = run(NoiseRefinement::bridge);
  CHECK(std::abs(stats::variance(lo) - 1.0) <= 3.0 * stats::variance_std_error(lo) + 1e-3);
  CHECK(std::abs(stats::variance(hi) - 0.55) <= 3.0 * stats::variance_std_error(hi) + 1e-3);
  const auto [c, se] = covariance(lo, hi);
  CHECK(std::abs(c) <= 4.0 * se + 1e-3);

  // Cell sums alone see only the overlap with each whole cell: 0.5 and 0.2525.
  const auto [clo, chi] = run(NoiseRefinement::none);
  CHECK(stats::variance(clo) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(stats::variance(chi) == doctest::Approx(0.2525).epsilon(0.05));
}

TEST_CASE("counter rng helpers") {
  CounterRng rng(17, 3);
  std::vector<double> u, p;
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    u.push_back(v);
    p.push_back(static_cast<double>(rng.poisson(2.5)));
  }
  CHECK(std::abs(stats::mean(u) - 0.5) <= 3.0 * stats::std_error(u));
  CHECK(std::abs(stats::mean(p) - 2.5) <= 3.0 * stats::std_error(p));
  CHECK(std::abs(stats::variance(p) - 2.5) <= 3.0 * stats::variance_std_error(p));
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
  CounterRng again(17, 3);
  CHECK(again.uniform() == u[0]);
}
