#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ldp/grid.hpp"
#include "ldp/measure.hpp"
#include "ldp/noise.hpp"

namespace ldp {

/// Calibration and validation switches shared by both particle systems.
///
/// With refinement K, SBM particles carry mass eps / K and branch at rate K, and the Moran
/// population has N = round(K / eps) individuals; both keep the quadratic-variation
/// calibration while shrinking the O(eps / K) motion noise. K = 1 is the base calibration.
struct ParticleOptions {
  std::size_t refinement = 1;
  double rate_multiplier = 1.0;  // scales the branching / resampling rate (miscalibration probe)
  bool branching = true;         // sbm; false gives pure Brownian motions
  bool resampling = true;        // moran; false gives independent Brownian motions
  bool stratified = false;       // initial positions at mass quantiles instead of i.i.d. draws
  std::size_t cap = 1000000;     // maximum particle count
};

/// Called at steps 0..nt with the current positions; every particle carries `mass`.
using ParticleVisitor =
    std::function<void(std::size_t step, std::span<const double> positions, double mass)>;

/// Moran-model quadratic-variation bookkeeping for one test function f.
struct MoranQv {
  std::function<double(double)> f;
  double jump_qv = 0.0;    // sum of squared jumps of <mu, f> from resampling events
  double variance_integral = 0.0;  // int (<mu, f^2> - <mu, f>^2) ds, left-point rule
  std::size_t events = 0;
};

/// Positions for `count` particles drawn from the normalized atoms of mu0 (i.i.d. or quantiles).
std::vector<double> sample_positions(const AtomMeasure& mu0, std::size_t count, bool stratified,
                                     CounterRng& rng);

/// Branching Brownian motion: Brownian steps of variance dt, then each particle independently,
/// with probability rate * dt, dies or splits in two with probability 1/2 each.
/// Throws ResourceError when the population exceeds the cap.
void simulate_sbm_visit(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                        const Grid& grid, const ParticleOptions& opts,
                        const ParticleVisitor& visit);
MeasurePath simulate_sbm_particles(const AtomMeasure& mu0, double epsilon,
                                   const NoiseStream& stream, const Grid& grid,
                                   const ParticleOptions& opts = {});

/// Moran model: N Brownian individuals; every ordered pair (i, j) fires at rate eps / 2 and j
/// adopts i's position. Events per step are Poisson with mean N (N - 1) eps dt / 2.
void simulate_moran_visit(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                          const Grid& grid, const ParticleOptions& opts,
                          const ParticleVisitor& visit, MoranQv* qv = nullptr);
MeasurePath simulate_fv_moran(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                              const Grid& grid, const ParticleOptions& opts = {},
                              MoranQv* qv = nullptr);

enum class CdfAnchor { zero, minus_infinity };

/// u_t(y) = mu_t((-inf, y]) or the signed integral of mu_t from 0 to y.
std::vector<double> empirical_cdf(const AtomMeasure& mu, const Grid& grid, CdfAnchor anchor);
PathField empirical_cdf_field(const MeasurePath& path, CdfAnchor anchor);

}  // namespace ldp
