#pragma once

// Monte Carlo campaigns: small-noise scaling, crude-MC deviation probabilities, the
// variational bracket, Kolmogorov moment regression and the particle cross-check.
//
// Every campaign is a pure function of its config: realization r of a scan always uses
// NoiseStream(seed, r) (common random numbers across the epsilon ladder), results are
// written to per-index slots and reduced in index order, so reruns are bit-identical
// whatever the thread count.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ldp/grid.hpp"
#include "ldp/io.hpp"
#include "ldp/metrics.hpp"
#include "ldp/models.hpp"
#include "ldp/optimize.hpp"
#include "ldp/particles.hpp"
#include "ldp/solver.hpp"
#include "ldp/stats.hpp"

namespace ldp {

enum class Deviation {
  weighted_sup,   // sup over (t, y) of e^{-beta |y|} |u - u0|
  metric,         // sup over sampled t of d_{alpha,beta}(u, u0)
  terminal_mean,  // <xi(u_T), id> - <xi(u0_T), id>, one-sided
};

Deviation parse_deviation(const std::string& name);
std::string to_string(Deviation d);

/// Deviation of one realization from the small-noise center u0, accumulated slice by slice.
/// Immutable after construction, so one instance serves all worker threads.
class DeviationFunctional {
 public:
  DeviationFunctional(const ModelSpec& model, const Grid& grid, Deviation kind,
                      const MetricParams& params, std::size_t metric_stride = 0);

  /// Folds slice `step` into the running value `acc` (start from 0).
  void observe(std::size_t step, std::span<const double> u, double& acc) const;

  Deviation kind() const { return kind_; }
  double center_mean() const { return center_mean_; }

 private:
  Grid grid_;
  Deviation kind_;
  MetricParams params_;
  std::size_t stride_;
  std::vector<std::vector<double>> center_;  // u0 slices
  std::vector<double> weight_;
  double center_mean_ = 0.0;
};

/// Deviation values for realizations [0, R) at noise intensity eps.
std::vector<double> deviation_samples(const ModelSpec& model, const Grid& grid, double epsilon,
                                      Deviation kind, const MetricParams& params,
                                      std::size_t realizations, std::uint64_t seed,
                                      std::size_t threads = 0,
                                      NoiseRefinement refinement = NoiseRefinement::bridge);

struct ConvergenceConfig {
  ModelSpec model;
  Grid grid;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3};
  std::size_t realizations = 200;
  std::uint64_t seed = 1;
  Deviation deviation = Deviation::weighted_sup;
  MetricParams params;
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::size_t threads = 0;
};

struct ConvergenceRow {
  double epsilon = 0.0;
  double mean_dev2 = 0.0;
  double std_error = 0.0;
  std::size_t realizations = 0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  stats::LinearFit fit;  // log mean_dev2 on log eps over eps > 0
  double slope_ci_low = 0.0, slope_ci_high = 0.0;

  Table table() const;
};

ConvergenceResult run_convergence_scan(const ConvergenceConfig& cfg);

struct LdpScanConfig {
  ModelSpec model;
  Grid grid;
  std::vector<double> epsilons{0.1, 0.05, 0.025};
  std::vector<double> deltas{0.1};
  std::size_t realizations = 1000;
  std::uint64_t seed = 1;
  Deviation deviation = Deviation::weighted_sup;
  MetricParams params;
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::size_t threads = 0;
};

struct LdpRow {
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t hits = 0;
  std::size_t realizations = 0;
  double p_hat = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  bool feasible = false;  // hits >= 10
  double exponent = 0.0;  // -eps log p_hat; nan when infeasible
};

struct LdpScanResult {
  std::vector<LdpRow> rows;  // epsilon-major, ladder order
  std::vector<double> deltas;
  /// Per delta: (max - min) / mean of the exponent over the last three ladder entries;
  /// nan when any of them is infeasible or the ladder is shorter than three.
  std::vector<double> spread;

  Table table() const;
  Table spread_table() const;
};

/// Event "deviation >= delta" per (eps, delta); delta = 0 is always hit by the sup functionals.
LdpScanResult run_ldp_scan(const LdpScanConfig& cfg);

struct BracketConfig {
  ModelSpec model;  // fvp
  Grid grid;
  double delta = 0.1;  // terminal-mean shift
  std::vector<double> epsilons{2e-3, 1e-3};
  std::size_t realizations = 1000000;
  std::uint64_t seed = 1;
  MinimizeOptions minimize;
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::size_t threads = 0;
};

struct BracketReport {
  LdpScanResult scan;
  MinimizeResult variational;
  double center_mean = 0.0;
  double mc_epsilon = 0.0;                // smallest feasible epsilon (nan if none)
  double mc_exponent = 0.0;               // nan if none
  double i_star = 0.0;
  double ratio = 0.0;                     // mc / I*
  bool one_sided = false;                 // no feasible MC row
  bool pass = false;                      // mc <= 1.25 I* and I* <= 2 mc + 0.05

  Table table() const;
};

BracketReport variational_bracket(const BracketConfig& cfg);

struct KolmogorovConfig {
  ModelSpec model;  // epsilon is the noise level of the sampled paths
  Grid grid;
  std::size_t moment = 4;  // n, even
  std::size_t realizations = 300;
  std::uint64_t seed = 1;
  double lag_min = 0.05, lag_max = 0.8;
  std::size_t lag_levels = 10;
  std::size_t directions = 8;   // split of each lag between space and time
  std::size_t lattice = 12;     // base points per axis
  double y_low = -1.0, y_high = 2.0;
  double beta1 = 0.5;
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::size_t threads = 0;
};

struct KolmogorovRow {
  double lag = 0.0;       // nominal |dy| + |dt|
  double distance = 0.0;  // mean realized distance on the grid
  double weighted_moment = 0.0;
  std::size_t pairs = 0;
};

struct KolmogorovReport {
  std::vector<KolmogorovRow> rows;
  stats::LinearFit fit;  // log weighted_moment on log distance
  double exponent = 0.0;  // 2 + q
  double q_hat = 0.0;
  double q_ci_half = 0.0;  // 95% half width

  Table table() const;
};

/// Diamond-shell design: for each lag r and direction f = (k + 1/2) / K a pair is
/// (t, y) -> (t + (1 - f) r, y + f r), with base points on a lattice over [0, T - dt] x
/// [y_low, y_high - dy]. Pair moments are averaged per lag before the log-log fit.
KolmogorovReport kolmogorov_fit(const KolmogorovConfig& cfg);

struct CompareConfig {
  ModelSpec model;  // sbm or fvp
  Grid grid;
  std::vector<double> epsilons{0.1, 0.05};
  std::vector<double> times{0.25, 0.5, 1.0};
  std::size_t realizations = 500;
  std::uint64_t seed = 1;
  ParticleOptions particles;
  std::size_t particle_nt = 0;  // time steps for the particle side; 0 = grid.nt
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::size_t threads = 0;
};

struct CompareRow {
  double epsilon = 0.0;
  double t = 0.0;
  std::string function;
  std::string moment;  // "mean" or "var"
  double spde = 0.0, spde_se = 0.0;
  double particle = 0.0, particle_se = 0.0;
  double z = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  double max_abs_z = 0.0;
  bool pass = false;  // all |z| <= 3

  Table table() const;
};

/// z = (a - b) / sqrt(se_a^2 + se_b^2), and 0 when both errors vanish and a == b.
double z_score(double a, double se_a, double b, double se_b);

/// Moments of <mu_t, f> from the SPDE (xi/psi of the solution) and from the particle system.
CompareReport compare_particles_spde(const CompareConfig& cfg);

/// Same comparison with the particle side replaced by a second SPDE run with identical seeds.
CompareReport compare_spde_spde(const CompareConfig& cfg);

}  // namespace ldp
