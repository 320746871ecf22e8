#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ldp/control.hpp"
#include "ldp/grid.hpp"
#include "ldp/models.hpp"
#include "ldp/noise.hpp"

namespace ldp {

/// Pool-adjacent-violators projection onto nondecreasing sequences (equal weights, L2).
/// fvp additionally clamps to [0, 1] and pins the endpoints to 0 and 1.
/// Returns the correction magnitude sum |u - proj(u)| dx.
double monotone_project(std::span<double> u, ModelKind kind, double dx);
Field monotone_project(const Field& u, ModelKind kind, double dx, double* magnitude = nullptr);

struct SolveStats {
  double projection_l1 = 0.0;      // summed over steps
  double max_projection_l1 = 0.0;  // largest single-step correction
};

/// Splitting scheme for
///   du = (1/2) u'' dt + theta int G(a, y, u) W(dt da) + int G(a, y, u) h_t(a) da dt:
/// u <- heat_step(u + theta * stochastic_increment + dt * control drift), then monotone_project
/// for sbm/fvp. The visitor sees slice 0 (initial field) through slice nt.
using SliceVisitor = std::function<void(std::size_t step, std::span<const double> u)>;

/// Sub-cell resolution of the noise for sbm/fvp.
///
/// none:   the per-cell sum sqrt(dt da) sum_k G_k xi_k. Inside a cell the driving Brownian
///         motion in `a` is interpolated linearly, so points whose values differ by less than
///         da share almost all their noise and low-mass regions are nearly noiseless.
/// bridge: adds the exact Brownian-bridge fluctuation inside each cell at the (sorted) values
///         u(y_i), so increments between any two points have variance theta^2 dt |u1 - u2|
///         as in the continuum. Extra normals come from the same stream. Ignored for custom G.
enum class NoiseRefinement { none, bridge };

NoiseRefinement parse_noise_refinement(const std::string& name);
std::string to_string(NoiseRefinement r);

/// Reusable solver state for many realizations on one (model, grid): the heat factorization,
/// the coefficient integral and the sampled initial field are built once.
class SpdeSolver {
 public:
  SpdeSolver(const ModelSpec& model, const Grid& grid,
             NoiseRefinement refinement = NoiseRefinement::bridge);

  void run(double theta, const Control* control, const NoiseStream* stream,
           const SliceVisitor& visit, SolveStats* stats = nullptr);

  const Grid& grid() const { return grid_; }
  const Field& initial() const { return initial_; }

 private:
  void add_bridge(const NoiseStream& stream, std::size_t step, double theta);

  ModelSpec model_;
  Grid grid_;
  HeatStepper heat_;
  IndicatorIntegral integral_;
  Field initial_;
  NoiseRefinement refinement_;
  std::vector<double> u_, drive_, cells_, xi_, bridge_buffer_;
};

void solve_spde_visit(const ModelSpec& model, const Grid& grid, double theta,
                      const Control* control, const NoiseStream* stream,
                      const SliceVisitor& visit, SolveStats* stats = nullptr,
                      NoiseRefinement refinement = NoiseRefinement::bridge);

PathField solve_spde(const ModelSpec& model, const Grid& grid, double theta,
                     const Control* control, const NoiseStream* stream,
                     SolveStats* stats = nullptr,
                     NoiseRefinement refinement = NoiseRefinement::bridge);

/// Heat flow of F: the small-noise center u^0.
PathField deterministic_limit(const ModelSpec& model, const Grid& grid);

/// The gamma map: solve_spde with theta = 0 and the given control.
PathField solve_controlled(const ModelSpec& model, const Control& h, const Grid& grid);

}  // namespace ldp
