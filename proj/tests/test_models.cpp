#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/models.hpp"
#include "ldp/noise.hpp"

using namespace ldp;

namespace {

ModelSpec fvp() {
  ModelSpec m;
  m.kind = ModelKind::fvp;
  return m;
}

ModelSpec sbm(double lo = -3.0, double hi = 3.0) {
  ModelSpec m;
  m.kind = ModelKind::sbm;
  m.a_min = lo;
  m.a_max = hi;
  return m;
}

std::vector<ProbePoint> random_probe(double lo, double hi, std::size_t n) {
  CounterRng rng(2024, 0);
  std::vector<ProbePoint> p;
  for (std::size_t i = 0; i < n; ++i) {
    p.push_back({lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform(), 0.0});
  }
  return p;
}

}  // namespace

TEST_CASE("coefficient values") {
  CHECK(g_eval(fvp(), 0.25, 0.0, 0.5) == 0.5);
  for (double a : {0.1, 0.5, 0.9}) CHECK(g_eval(fvp(), a, 0.0, 0.0) == 0.0);
  CHECK(g_eval(sbm(), -1.0, 0.0, -2.0) == -1.0);
  CHECK(g_eval(sbm(), 1.0, 0.0, 2.0) == 1.0);
  CHECK(g_eval(sbm(), 3.0, 0.0, 2.0) == 0.0);
}

TEST_CASE("cross products") {
  CHECK(g_cross(fvp(), 0.5, 0.5) == doctest::Approx(0.25));
  CHECK(g_cross(fvp(), 0.25, 0.75) == doctest::Approx(0.0625));
  CHECK(g_cross(sbm(), -1.0, 2.0) == 0.0);
  CHECK(g_cross(sbm(), -1.0, -2.5) == doctest::Approx(1.0));

  for (const ModelSpec& m : {fvp(), sbm()}) {
    const double lo = m.kind == ModelKind::fvp ? 0.0 : -2.5;
    const double hi = m.kind == ModelKind::fvp ? 1.0 : 2.5;
    for (const ProbePoint& p : random_probe(lo, hi, 500)) {
      const double c = g_cross(m, p.u1, p.u2);
      CHECK(c == g_cross(m, p.u2, p.u1));
      CHECK(g_cross(m, p.u1, p.u1) >= 0.0);
      CHECK(c * c <= g_cross(m, p.u1, p.u1) * g_cross(m, p.u2, p.u2) + 1e-15);
    }
  }
}

TEST_CASE("cell quadrature of the cross product converges at first order") {
  for (const ModelSpec& m : {fvp(), sbm(-2.0, 2.0)}) {
    const double lo = m.kind == ModelKind::fvp ? 0.0 : -1.9;
    const double hi = m.kind == ModelKind::fvp ? 1.0 : 1.9;
    const auto probe = random_probe(lo, hi, 200);
    std::vector<double> worst;
    for (std::size_t na : {16, 32, 64, 128}) {
      double e = 0.0;
      for (const auto& p : probe) {
        e = std::max(e, std::abs(g_cross_quadrature(m, na, p.u1, p.u2) - g_cross(m, p.u1, p.u2)));
      }
      CHECK(e <= (m.a_max - m.a_min) / static_cast<double>(na));
      worst.push_back(e);
    }
    for (std::size_t k = 1; k < worst.size(); ++k) CHECK(worst[k - 1] / worst[k] >= 1.5);
  }
}

TEST_CASE("structural conditions") {
  const auto probe = random_probe(-2.5, 2.5, 400);
  const ConditionReport s = verify_coefficient_conditions(sbm(), probe);
  CHECK(s.holds_growth);
  CHECK(s.holds_half_lipschitz);
  CHECK(s.k_lipschitz == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.k_growth <= 0.5 + 1e-12);

  const ConditionReport f = verify_coefficient_conditions(fvp(), random_probe(0.0, 1.0, 400));
  CHECK(f.holds_growth);
  CHECK(f.holds_half_lipschitz);
  for (const ProbePoint& p : random_probe(0.0, 1.0, 50)) {
    const double d = std::abs(p.u1 - p.u2);
    CHECK(g_diff_integral(fvp(), p.u1, p.u2) == doctest::Approx(d * (1.0 - d)).epsilon(1e-12));
  }

  ModelSpec z;
  z.kind = ModelKind::custom;
  z.custom_g = named_coefficient("zero");
  const ConditionReport zr = verify_coefficient_conditions(z, probe, 0.0);
  CHECK(zr.holds_growth);
  CHECK(zr.k_growth == 0.0);

  ModelSpec bad;
  bad.kind = ModelKind::custom;
  bad.custom_g = [](double, double, double u) { return u * u; };  // quadratic growth
  const ConditionReport br = verify_coefficient_conditions(bad, probe, 1.0);
  CHECK_FALSE(br.holds_growth);
  CHECK(br.growth_witness.has_value());
}

TEST_CASE("initial fields") {
  Grid g;
  g.bc = Boundary::dirichlet_pinned;
  ModelSpec m = fvp();
  m.initial = parse_initial_datum("uniform-cdf(0,1)");
  Field f = initial_field(m, g);
  for (std::size_t i = 0; i < g.ny; ++i) CHECK(f[i] == doctest::Approx(std::clamp(g.y(i), 0.0, 1.0)));

  m.initial = parse_initial_datum("dirac(0)");
  f = initial_field(m, g);
  for (std::size_t i = 0; i < g.ny; ++i) CHECK(f[i] == (g.y(i) >= 0.0 ? 1.0 : 0.0));

  Grid gs;
  gs.a_min = -2.0;
  gs.a_max = 2.0;
  ModelSpec s = sbm(-2.0, 2.0);
  s.initial = parse_initial_datum("lebesgue(-1,1)");
  f = initial_field(s, gs);
  for (std::size_t i = 0; i < gs.ny; ++i) CHECK(f[i] == doctest::Approx(std::clamp(gs.y(i), -1.0, 1.0)));

  m.initial = parse_initial_datum("gaussian-cdf(0,1,2)");  // mass 2 is not a probability
  CHECK_THROWS_AS(initial_field(m, g), ValidationError);
  CHECK_THROWS_AS(parse_initial_datum("cauchy(0,1)"), ValidationError);
  CHECK_THROWS_AS(parse_model_kind("moran"), ValidationError);
}

TEST_CASE("tabulated initial datum") {
  const std::string path = "tabulated_cdf_test.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("y,F\n-1,0\n0,0.25\n1,1\n", f);
    std::fclose(f);
  }
  const InitialDatum d = parse_initial_datum("tabulated(" + path + ")");
  CHECK(d(-5.0) == 0.0);
  CHECK(d(0.5) == doctest::Approx(0.625));
  CHECK(d(3.0) == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("noise window suggestion") {
  Grid g;
  ModelSpec m = sbm(-1.0, 1.0);
  m.initial = parse_initial_datum("uniform-cdf(0,1)");
  m.epsilon = 0.1;
  const auto [lo, hi] = suggest_noise_window(m, g);
  CHECK(lo <= -1.0);
  CHECK(hi >= 2.0);
  const auto [flo, fhi] = suggest_noise_window(fvp(), g);
  CHECK(flo == 0.0);
  CHECK(fhi == 1.0);
}
