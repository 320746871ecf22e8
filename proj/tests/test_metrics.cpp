#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/metrics.hpp"
#include "ldp/noise.hpp"

using namespace ldp;

namespace {

Grid line_grid() {
  Grid g;
  g.L = 8.0;
  g.ny = 321;
  return g;
}

std::vector<double> random_field(const Grid& g, CounterRng& rng) {
  std::vector<double> u(g.ny);
  const double amp = 3.0 * rng.uniform();
  const double freq = 4.0 * rng.uniform();
  for (std::size_t i = 0; i < g.ny; ++i) {
    u[i] = amp * std::sin(freq * g.y(i) + rng.uniform()) + 0.2 * rng.normal();
  }
  return u;
}

}  // namespace

TEST_CASE("weighted Hoelder norm of the identity") {
  const Grid g = line_grid();
  MetricParams p;
  p.alpha = 0.4;
  p.beta = 1.0;
  std::vector<double> u(g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) u[i] = g.y(i);
  // e^{-1} from the weighted sup plus e^{-1} 2^{0.6} from the pair (-1, 1).
  CHECK(holder_norm(u, g, 1, p) == doctest::Approx(0.925480404633585).epsilon(1e-12));
  CHECK(holder_profile(u, g, p).front() == doctest::Approx(holder_norm(u, g, 1, p)));
}

TEST_CASE("seminorm laws") {
  const Grid g = line_grid();
  const MetricParams p;
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_field(g, rng);
    const auto v = random_field(g, rng);
    std::vector<double> sum(g.ny), scaled(g.ny);
    for (std::size_t i = 0; i < g.ny; ++i) {
      sum[i] = u[i] + v[i];
      scaled[i] = -2.5 * u[i];
    }
    for (std::size_t m : {1u, 4u, 16u}) {
      CHECK(holder_norm(sum, g, m, p) <= holder_norm(u, g, m, p) + holder_norm(v, g, m, p) + 1e-12);
      CHECK(holder_norm(scaled, g, m, p) == doctest::Approx(2.5 * holder_norm(u, g, m, p)));
    }
  }
  CHECK(holder_norm(std::vector<double>(g.ny, 0.0), g, 3, p) == 0.0);
}

TEST_CASE("metric d") {
  const Grid g = line_grid();
  const MetricParams p;
  CounterRng rng(12, 0);
  const auto u = random_field(g, rng);
  const auto v = random_field(g, rng);
  CHECK(metric_d(u, u, g, p) == 0.0);
  CHECK(metric_d(u, v, g, p) == metric_d(v, u, g, p));
  CHECK(metric_d(u, v, g, p) <= 1.0 - std::ldexp(1.0, -static_cast<int>(p.m_max)));

  std::vector<double> w(g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) w[i] = u[i] + 1e-3;
  const double small = metric_d(u, w, g, p);
  CHECK(small > 0.0);
  CHECK(small < 1e-3);

  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_field(g, rng);
    const auto b = random_field(g, rng);
    const auto c = random_field(g, rng);
    CHECK(metric_d(a, c, g, p) <= metric_d(a, b, g, p) + metric_d(b, c, g, p) + 1e-12);
  }
}

TEST_CASE("measures from distribution functions") {
  const Grid g = line_grid();
  std::vector<double> u(g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) u[i] = std::clamp(g.y(i), 0.0, 1.0);
  const AtomMeasure mu = psi_map(u, g);
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.integrate([](double x) { return x; }) == doctest::Approx(0.5));
  CHECK(xi_map(u, g).total_mass() == doctest::Approx(1.0));

  u[100] = 2.0;
  CHECK_THROWS_AS(xi_map(u, g), ValidationError);
  std::vector<double> half(g.ny, 0.5);
  CHECK_THROWS_AS(psi_map(half, g), ValidationError);
}

TEST_CASE("mollifier and weight sandwich") {
  double integral = 0.0;
  const std::size_t n = 20000;
  for (std::size_t k = 0; k < n; ++k) integral += mollifier(-1.0 + (k + 0.5) * 2.0 / n) * 2.0 / n;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mollifier(1.0) == 0.0);
  CHECK(mollified_weight(0.0, 0.3) == doctest::Approx(1.0).epsilon(1e-12));

  for (double beta : {0.25, 0.5, 1.0, 2.0}) {
    const auto [c0, C0] = sandwich_constants(beta);
    CHECK(c0 > 0.0);
    CHECK(c0 <= C0);
    CHECK(C0 / c0 <= std::exp(2.0 * beta));
  }
}

TEST_CASE("weak metric") {
  const AtomMeasure at0{{0.0}, {1.0}};
  const AtomMeasure at3{{3.0}, {1.0}};
  CHECK(weak_metric(at0, at3, 1.0) == doctest::Approx(0.950212931632136).epsilon(1e-12));
  CHECK(weak_metric(at0, at0, 1.0) == 0.0);
  CHECK(test_dictionary().size() == 21);
  for (const auto& tf : test_dictionary()) {
    for (double x : {-100.0, -2.0, 0.0, 1.5, 100.0}) CHECK(std::abs(tf.f(x)) <= 1.0);
  }
}

TEST_CASE("parameter validation") {
  MetricParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 0.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = MetricParams{};
  p.beta1 = 2.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = MetricParams{};
  p.m_max = 4;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
