#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/particles.hpp"
#include "ldp/stats.hpp"

using namespace ldp;

namespace {

Grid time_grid(std::size_t nt = 100) {
  Grid g;
  g.ny = 161;
  g.nt = nt;
  return g;
}

AtomMeasure uniform_atoms(std::size_t n, double mass) {
  AtomMeasure mu;
  for (std::size_t k = 0; k < n; ++k) {
    mu.positions.push_back((k + 0.5) / static_cast<double>(n));
    mu.masses.push_back(mass / static_cast<double>(n));
  }
  return mu;
}

double terminal_mass(const AtomMeasure& mu0, double eps, std::uint64_t r, const Grid& g,
                     const ParticleOptions& opts) {
  double m = 0.0;
  simulate_sbm_visit(mu0, eps, NoiseStream(5, r), g, opts,
                     [&](std::size_t step, std::span<const double> x, double mass) {
                       if (step == g.nt) m = static_cast<double>(x.size()) * mass;
                     });
  return m;
}

}  // namespace

TEST_CASE("initial positions") {
  const AtomMeasure mu{{-1.0, 2.0}, {0.25, 0.75}};
  CounterRng rng(1, 0);
  const auto x = sample_positions(mu, 4, true, rng);
  CHECK(x == std::vector<double>{-1.0, 2.0, 2.0, 2.0});
  const auto y = sample_positions(mu, 20000, false, rng);
  double left = 0.0;
  for (double v : y) left += v < 0.0 ? 1.0 : 0.0;
  CHECK(left / 20000.0 == doctest::Approx(0.25).epsilon(0.05));
  CHECK_THROWS_AS(sample_positions(AtomMeasure{}, 3, true, rng), ValidationError);
}

TEST_CASE("branching particles") {
  const Grid g = time_grid();
  const AtomMeasure mu0 = uniform_atoms(50, 1.0);
  const double eps = 0.1;

  ParticleOptions still;
  still.branching = false;
  CHECK(terminal_mass(mu0, eps, 0, g, still) == doctest::Approx(1.0));

  ParticleOptions opts;
  opts.refinement = 4;
  std::vector<double> mass;
  for (std::uint64_t r = 0; r < 500; ++r) mass.push_back(terminal_mass(mu0, eps, r, g, opts));
  // Critical branching: the total mass is a martingale with variance eps <mu0, 1> t.
  CHECK(std::abs(stats::mean(mass) - 1.0) <= 4.0 * stats::std_error(mass));
  CHECK(std::abs(stats::variance(mass) - eps) <= 4.0 * stats::variance_std_error(mass));

  ParticleOptions tiny;
  tiny.cap = 5;
  CHECK_THROWS_AS(terminal_mass(mu0, eps, 0, g, tiny), ResourceError);
}

TEST_CASE("extinction becomes likelier with larger eps") {
  const Grid g = time_grid();
  const AtomMeasure mu0{{0.0}, {1.0}};
  std::vector<double> extinct;
  for (double eps : {0.25, 0.5, 1.0}) {
    std::size_t dead = 0;
    for (std::uint64_t r = 0; r < 2000; ++r) dead += terminal_mass(mu0, eps, r, g, {}) == 0.0 ? 1 : 0;
    extinct.push_back(static_cast<double>(dead) / 2000.0);
  }
  CHECK(extinct[0] < extinct[1]);
  CHECK(extinct[1] < extinct[2]);
  // One particle of critical binary branching at rate 1 dies out by t = 1 with probability 1/3.
  CHECK(extinct[2] == doctest::Approx(1.0 / 3.0).epsilon(0.1));
}

TEST_CASE("Moran population") {
  const Grid g = time_grid();
  const AtomMeasure mu0 = uniform_atoms(100, 1.0);
  const MeasurePath p = simulate_fv_moran(mu0, 0.05, NoiseStream(3, 0), g);
  for (std::size_t s = 0; s < p.steps(); ++s) CHECK(p.total_mass(s) == doctest::Approx(1.0));

  SUBCASE("without resampling the mean diffuses") {
    ParticleOptions free;
    free.resampling = false;
    const double eps = 0.1;  // N = 10
    std::vector<double> means;
    for (std::uint64_t r = 0; r < 4000; ++r) {
      double m = 0.0;
      simulate_moran_visit(mu0, eps, NoiseStream(8, r), g, free,
                           [&](std::size_t step, std::span<const double> x, double) {
                             if (step != g.nt) return;
                             for (double v : x) m += v / static_cast<double>(x.size());
                           });
      means.push_back(m);
    }
    const double var0 = 1.0 / 12.0 - 1.0 / (12.0 * 100.0 * 100.0);
    CHECK(std::abs(stats::mean(means) - 0.5) <= 4.0 * stats::std_error(means));
    const double expected = (var0 + g.T) / 10.0;
    CHECK(std::abs(stats::variance(means) - expected) <= 4.0 * stats::variance_std_error(means));
  }
  SUBCASE("resampling jumps carry the predicted quadratic variation") {
    const double eps = 0.01;
    double jumps = 0.0, predicted = 0.0;
    for (std::uint64_t r = 0; r < 50; ++r) {
      MoranQv qv{[](double x) { return std::tanh(x); }};
      simulate_moran_visit(mu0, eps, NoiseStream(9, r), g, {}, [](std::size_t, std::span<const double>, double) {},
                           &qv);
      CHECK(qv.events > 0);
      jumps += qv.jump_qv;
      predicted += eps * qv.variance_integral;
    }
    CHECK(jumps / predicted == doctest::Approx(1.0).epsilon(0.1));
  }
  CHECK_THROWS_AS(simulate_fv_moran(mu0, 0.5, NoiseStream(3, 0), g), ValidationError);
}

TEST_CASE("empirical distribution functions") {
  Grid g;
  g.L = 2.0;
  g.ny = 5;  // y = -2, -1, 0, 1, 2
  const AtomMeasure mu{{0.5, -1.0}, {0.7, 0.3}};
  CHECK(empirical_cdf(mu, g, CdfAnchor::minus_infinity) == std::vector<double>{0.0, 0.3, 0.3, 1.0, 1.0});
  const auto z = empirical_cdf(mu, g, CdfAnchor::zero);
  CHECK(z[0] == doctest::Approx(-0.3));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(0.0));
  CHECK(z[3] == doctest::Approx(0.7));
}
