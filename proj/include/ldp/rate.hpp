#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ldp/measure.hpp"
#include "ldp/models.hpp"

namespace ldp {

/// Diagnostics for the Cameron-Martin conditions on a density path.
struct CameronMartinReport {
  // 1: mu_0 equals the reference initial measure.
  bool initial_matches = true;
  double initial_max_abs = 0.0;
  // 2: total-variation proxy for absolute continuity in time over the test dictionary.
  //    Step n is flagged when |<mu_{n+1} - mu_n, f>| exceeds 10x both neighbouring increments.
  bool time_continuous = true;
  std::vector<std::size_t> jump_steps;
  double max_total_variation = 0.0;
  // 3: cells where the density sits at the floor but the drift (w' - w''/2) contributes more
  //    than 1e-6 to the rate.
  bool support_ok = true;
  std::size_t support_violations = 0;
  std::optional<std::pair<double, double>> support_witness;  // (t, y)
  // 4: int int psi^2 dmu dt is finite.
  bool psi_square_integrable = true;
  double psi_norm_sq = 0.0;

  bool all_pass() const {
    return initial_matches && time_continuous && support_ok && psi_square_integrable;
  }
};

struct RateReport {
  double i_energy = 0.0;  // (1/2) int int h^2, when a control is known (NaN otherwise)
  double i_density = 0.0;
  std::vector<std::vector<double>> psi;  // [step][i]
  double floor_mass = 0.0;               // fraction of (t, y) cells with w below the floor
  std::vector<double> centering_residual;  // fvp: <mu_t, psi_t> per step
  double max_centering_residual = 0.0;
  CameronMartinReport cm;
};

/// psi_n = ((w_{n+1} - w_n)/dt - w''_{n+1}/2) / max(w_n, floor), the residual of the solver's
/// backward Euler heat step, with mirrored ends in y; I = (1/2) sum psi^2 max(w, floor) dy dt
/// over interior points and the intervals [t_n, t_{n+1}].
/// Fills cm.psi_norm_sq and cm.psi_square_integrable; other cm fields are left at defaults.
RateReport rate_density(const MeasurePath& path, ModelKind kind, double floor = 1e-8);

/// Evaluates the four conditions; `nu` is the reference initial density on the grid.
CameronMartinReport cameron_martin_check(const MeasurePath& path, std::span<const double> nu,
                                         double floor = 1e-8);

}  // namespace ldp
