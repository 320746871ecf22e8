#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ldp/control.hpp"
#include "ldp/grid.hpp"
#include "ldp/models.hpp"
#include "ldp/rate.hpp"

namespace ldp {

/// <xi(u), id> = sum_i (u_{i+1} - u_i) (y_i + dx / 2).
double terminal_mean(std::span<const double> u, const Grid& grid);

/// Terminal target for the variational problem.
struct TerminalEvent {
  enum class Kind { mean_shift, field_match };

  Kind kind = Kind::mean_shift;
  double target_mean = 0.0;         // mean_shift: require terminal_mean >= target_mean
  std::vector<double> target_field; // field_match: L2 distance to this field

  static TerminalEvent mean_at_least(double m) { return {Kind::mean_shift, m, {}}; }
  static TerminalEvent match_field(std::vector<double> f) {
    return {Kind::field_match, 0.0, std::move(f)};
  }

  /// mean_shift: max(0, m* - M)^2; field_match: sum (u - target)^2 dx.
  double violation(std::span<const double> u, const Grid& grid) const;
  void violation_gradient(std::span<const double> u, const Grid& grid, std::span<double> out) const;
};

/// J(h) = control_energy(h) + weight * violation(gamma(F, h)_T) and, when `grad` is given,
/// its gradient by the discrete adjoint of the splitting scheme (projection treated as identity).
/// sbm/fvp only.
double penalized_objective(const ModelSpec& model, const Grid& grid, const TerminalEvent& event,
                           const Control& h, double weight, Control* grad = nullptr);

struct MinimizeOptions {
  std::vector<double> penalty_ladder{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  std::size_t max_iter = 400;     // per ladder stage
  double grad_tol = 1e-9;         // on the gradient in normalized coordinates
  double rel_tol = 1e-12;         // a stage also ends after stall_iters steps that each gain
  std::size_t stall_iters = 5;    // less than rel_tol * |objective|
  double energy_budget = std::numeric_limits<double>::infinity();  // ball 1/2 |k|^2 <= N
  std::optional<Control> warm_start;
};

struct TraceRow {
  std::size_t stage = 0;
  std::size_t iteration = 0;
  double weight = 0.0;
  double objective = 0.0;
  double energy = 0.0;
  double violation = 0.0;
};

struct MinimizeResult {
  Control h;
  RateReport report;                 // i_energy = control_energy(h)
  double energy = 0.0;
  double violation = 0.0;
  bool converged = false;            // last stage met grad_tol, stalled, or found no descent
  std::size_t iterations = 0;
  std::vector<double> stage_energy;  // optimal energy per ladder weight
  std::vector<TraceRow> trace;
};

/// Barzilai-Borwein gradient descent with Armijo backtracking on each ladder weight,
/// warm-started from the previous stage.
MinimizeResult minimize_rate(const ModelSpec& model, const Grid& grid, const TerminalEvent& event,
                             const MinimizeOptions& opts = {});

}  // namespace ldp
