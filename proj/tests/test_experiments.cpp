#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/experiments.hpp"

using namespace ldp;

namespace {

ModelSpec fvp() {
  ModelSpec m;
  m.kind = ModelKind::fvp;
  return m;
}

Grid small_grid() {
  Grid g;
  g.L = 4.0;
  g.ny = 81;
  g.nt = 100;
  g.na = 16;
  g.bc = Boundary::dirichlet_pinned;
  return g;
}

}  // namespace

TEST_CASE("statistics helpers") {
  const auto [lo, hi] = stats::wilson_interval(5, 10);
  CHECK(lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.7634).epsilon(1e-3));
  CHECK(stats::wilson_interval(0, 10).first == 0.0);

  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{1.5, 3.5, 5.5, 7.5};
  const stats::LinearFit f = stats::ols(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(-0.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(stats::ols(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 1.0}), ValidationError);

  CHECK(z_score(1.0, 0.0, 1.0, 0.0) == 0.0);
  CHECK(z_score(1.0, 0.3, 0.0, 0.4) == doctest::Approx(2.0));
}

TEST_CASE("convergence scan") {
  ConvergenceConfig cfg;
  cfg.model = fvp();
  cfg.grid = small_grid();
  cfg.epsilons = {0.0, 1e-2, 1e-3};
  cfg.realizations = 40;
  const ConvergenceResult r = run_convergence_scan(cfg);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].mean_dev2 == 0.0);
  CHECK(r.rows[0].std_error == 0.0);
  CHECK(r.fit.n == 2);
  CHECK(r.fit.slope == doctest::Approx(1.0).epsilon(0.15));

  ConvergenceConfig twice = cfg;
  twice.epsilons = {1e-2};
  twice.realizations = 160;
  cfg.epsilons = {1e-2};
  const double se1 = run_convergence_scan(cfg).rows[0].std_error;
  cfg.realizations = 80;
  const double se2 = run_convergence_scan(cfg).rows[0].std_error;
  const double se4 = run_convergence_scan(twice).rows[0].std_error;
  CHECK(se1 / se2 == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
  CHECK(se2 / se4 == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("deviation probabilities") {
  LdpScanConfig cfg;
  cfg.model = fvp();
  cfg.grid = small_grid();
  cfg.epsilons = {0.05, 0.02};
  cfg.deltas = {0.0, 0.05, 0.1, 0.2};
  cfg.realizations = 200;
  const LdpScanResult r = run_ldp_scan(cfg);
  REQUIRE(r.rows.size() == 8);
  for (std::size_t e = 0; e < 2; ++e) {
    const LdpRow* row = &r.rows[4 * e];
    CHECK(row[0].p_hat == 1.0);
    CHECK(row[0].exponent == 0.0);
    for (std::size_t d = 1; d < 4; ++d) {
      CHECK(row[d].hits <= row[d - 1].hits);
      if (row[d].feasible) CHECK(row[d].exponent >= row[d - 1].exponent);
      if (!row[d].feasible) CHECK(std::isnan(row[d].exponent));
    }
  }
  CHECK(std::isnan(r.spread[0]));  // ladder shorter than three
}

TEST_CASE("reruns do not depend on the thread count") {
  const ModelSpec m = fvp();
  const Grid g = small_grid();
  const MetricParams p;
  const auto one = deviation_samples(m, g, 0.01, Deviation::metric, p, 12, 3, 1);
  const auto three = deviation_samples(m, g, 0.01, Deviation::metric, p, 12, 3, 3);
  CHECK(one == three);
  const auto other_seed = deviation_samples(m, g, 0.01, Deviation::metric, p, 12, 4, 1);
  CHECK(one != other_seed);
}

TEST_CASE("an SPDE run compared with itself") {
  CompareConfig cfg;
  cfg.model = fvp();
  cfg.grid = small_grid();
  cfg.epsilons = {0.05};
  cfg.times = {0.5, 1.0};
  cfg.realizations = 30;
  const CompareReport r = compare_spde_spde(cfg);
  CHECK_FALSE(r.rows.empty());
  CHECK(r.max_abs_z == 0.0);
  CHECK(r.pass);
}

TEST_CASE("Kolmogorov regression") {
  KolmogorovConfig cfg;
  cfg.model = fvp();
  cfg.model.epsilon = 1.0;
  cfg.grid = small_grid();
  cfg.realizations = 4;
  cfg.lag_min = cfg.lag_max = 0.2;
  CHECK_THROWS_AS(kolmogorov_fit(cfg), ValidationError);  // every level at the same distance

  cfg.lag_max = 0.8;
  const KolmogorovReport rep = kolmogorov_fit(cfg);
  CHECK(rep.rows.size() == cfg.lag_levels);
  CHECK(rep.q_hat == doctest::Approx(rep.exponent - 2.0));
  cfg.moment = 3;
  CHECK_THROWS_AS(kolmogorov_fit(cfg), ValidationError);
}
