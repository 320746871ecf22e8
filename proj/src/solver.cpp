#include "ldp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldp/error.hpp"

namespace ldp {

double monotone_project(std::span<double> u, ModelKind kind, double dx) {
  const std::size_t n = u.size();
  if (n == 0) return 0.0;
  bool clean = true;
  for (std::size_t i = 1; i < n && clean; ++i) clean = u[i] >= u[i - 1];
  if (clean && kind == ModelKind::fvp) clean = u[0] == 0.0 && u[n - 1] == 1.0;
  if (clean) return 0.0;
  std::vector<double> original(u.begin(), u.end());

  // Blocks of pooled values: (sum, count).
  std::vector<double> sum;
  std::vector<std::size_t> count;
  sum.reserve(n);
  count.reserve(n);
  bool violated = false;
  for (std::size_t i = 0; i < n; ++i) {
    sum.push_back(u[i]);
    count.push_back(1);
    while (sum.size() > 1 && sum[sum.size() - 2] / static_cast<double>(count[count.size() - 2]) >
                                 sum.back() / static_cast<double>(count.back())) {
      sum[sum.size() - 2] += sum.back();
      count[count.size() - 2] += count.back();
      sum.pop_back();
      count.pop_back();
      violated = true;
    }
  }
  if (violated) {
    std::size_t i = 0;
    for (std::size_t b = 0; b < sum.size(); ++b) {
      const double v = sum[b] / static_cast<double>(count[b]);
      for (std::size_t c = 0; c < count[b]; ++c) u[i++] = v;
    }
  }
  if (kind == ModelKind::fvp) {
    for (double& v : u) v = std::clamp(v, 0.0, 1.0);
    u[0] = 0.0;
    u[n - 1] = 1.0;
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) l1 += std::abs(u[i] - original[i]);
  return l1 * dx;
}

Field monotone_project(const Field& u, ModelKind kind, double dx, double* magnitude) {
  Field out = u;
  const double m = monotone_project(std::span<double>(out.values), kind, dx);
  if (magnitude != nullptr) *magnitude = m;
  return out;
}

NoiseRefinement parse_noise_refinement(const std::string& name) {
  if (name == "none") return NoiseRefinement::none;
  if (name == "bridge") return NoiseRefinement::bridge;
  throw ValidationError("unknown noise refinement '" + name + "' (none | bridge)");
}

std::string to_string(NoiseRefinement r) { return r == NoiseRefinement::none ? "none" : "bridge"; }

SpdeSolver::SpdeSolver(const ModelSpec& model, const Grid& grid, NoiseRefinement refinement)
    : model_((check_compatible(model, grid), model)),
      grid_(grid),
      heat_(grid, grid.dt()),
      integral_(model, grid),
      initial_(initial_field(model, grid)),
      refinement_(refinement),
      u_(grid.ny),
      drive_(grid.ny),
      cells_(grid.na),
      xi_(grid.na) {}

void SpdeSolver::run(double theta, const Control* control, const NoiseStream* stream,
                     const SliceVisitor& visit, SolveStats* stats) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ValidationError("solve_spde: theta must be >= 0");
  const Grid& grid = grid_;
  const bool noisy = theta > 0.0;
  if (noisy) {
    grid.check_noise_gate();
    if (stream == nullptr) throw ValidationError("solve_spde: theta > 0 needs a noise stream");
  }
  if (control != nullptr) control->check(grid);

  const std::size_t ny = grid.ny;
  const std::size_t na = grid.na;
  const double dt = grid.dt();
  const double noise_scale = theta * std::sqrt(dt / grid.da());
  const ModelKind kind = model_.kind;
  const bool project = kind != ModelKind::custom;
  const bool forced = noisy || control != nullptr;
  std::vector<double>& u = u_;
  u = initial_.values;
  SolveStats local;

  visit(0, u);
  for (std::size_t step = 0; step < grid.nt; ++step) {
    if (forced) {
      if (kind == ModelKind::sbm) {
        const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        if (*lo < grid.a_min) throw WindowExceededError(step, *lo, grid.a_min, grid.a_max);
        if (*hi > grid.a_max) throw WindowExceededError(step, *hi, grid.a_min, grid.a_max);
      }
      std::fill(cells_.begin(), cells_.end(), 0.0);
      if (noisy) {
        sample_step_noise(*stream, step, xi_);
        for (std::size_t k = 0; k < na; ++k) cells_[k] = noise_scale * xi_[k];
      }
      if (control != nullptr) {
        const auto h = control->row(step);
        for (std::size_t k = 0; k < na; ++k) cells_[k] += dt * h[k];
      }
      integral_.set_cells(cells_);
      integral_.evaluate(u, drive_);
      if (noisy && refinement_ == NoiseRefinement::bridge && kind != ModelKind::custom) {
        add_bridge(*stream, step, theta);
      }
      for (std::size_t i = 0; i < ny; ++i) u[i] += drive_[i];
      if (kind == ModelKind::fvp) {
        u.front() = 0.0;
        u.back() = 1.0;
      }
    }
    heat_.apply_in_place(u);
    if (project) {
      const double m = monotone_project(std::span<double>(u), kind, grid.dx());
      local.projection_l1 += m;
      local.max_projection_l1 = std::max(local.max_projection_l1, m);
    }
    for (std::size_t i = 0; i < ny; ++i) {
      if (!std::isfinite(u[i])) {
        throw NumericalError("solve_spde: non-finite value at step " + std::to_string(step + 1) +
                             ", y = " + std::to_string(grid.y(i)));
      }
    }
    visit(step + 1, u);
  }
  if (stats != nullptr) *stats = local;
}

// Bridge normals live far above the cell counters of the same step.
constexpr std::size_t kBridgeCounter = std::size_t{1} << 30;

void SpdeSolver::add_bridge(const NoiseStream& stream, std::size_t step, double theta) {
  // u is nondecreasing here (initial datum or projected slice), so one sweep visits the
  // values in order and each cell's bridge is sampled sequentially from its left edge.
  const Grid& g = grid_;
  const double da = g.da();
  const double sig2 = theta * theta * g.dt();
  std::size_t cell = g.na;  // none yet
  double s_prev = 0.0, b_prev = 0.0, right = 0.0;
  std::size_t counter = kBridgeCounter;
  double spare = 0.0;
  const auto next_normal = [&] {
    double z;
    if ((counter & 1) == 0) {
      stream.normal_pair(step, counter / 2, z, spare);
    } else {
      z = spare;
    }
    ++counter;
    return z;
  };
  const auto bridge_at = [&](double x) {
    const double pos = std::clamp((x - g.a_min) / da, 0.0, static_cast<double>(g.na));
    const std::size_t k = std::min(static_cast<std::size_t>(pos), g.na - 1);
    if (k != cell) {
      cell = k;
      s_prev = g.a_edge(k);
      right = g.a_edge(k + 1);
      b_prev = 0.0;
    }
    if (!(x > s_prev)) return b_prev;
    if (!(x < right)) return 0.0;
    const double keep = (right - x) / (right - s_prev);
    const double var = sig2 * (x - s_prev) * keep;
    b_prev = b_prev * keep + std::sqrt(var) * next_normal();
    s_prev = x;
    return b_prev;
  };

  std::vector<double>& u = u_;
  const std::size_t n = g.ny;
  if (model_.kind == ModelKind::fvp) {
    // D = B(u) - u B(1) and the bridge vanishes at a = 1.
    for (std::size_t i = 0; i < n; ++i) drive_[i] += bridge_at(u[i]);
    return;
  }
  // sbm: D = B(u) - B(0); the value at 0 joins the sweep at its sorted position.
  const std::size_t p = static_cast<std::size_t>(
      std::lower_bound(u.begin(), u.end(), 0.0) - u.begin());
  bridge_buffer_.resize(n);
  for (std::size_t i = 0; i < p; ++i) bridge_buffer_[i] = bridge_at(u[i]);
  const double b0 = bridge_at(0.0);
  for (std::size_t i = p; i < n; ++i) bridge_buffer_[i] = bridge_at(u[i]);
  for (std::size_t i = 0; i < n; ++i) drive_[i] += bridge_buffer_[i] - b0;
}

void solve_spde_visit(const ModelSpec& model, const Grid& grid, double theta,
                      const Control* control, const NoiseStream* stream,
                      const SliceVisitor& visit, SolveStats* stats, NoiseRefinement refinement) {
  SpdeSolver solver(model, grid, refinement);
  solver.run(theta, control, stream, visit, stats);
}

PathField solve_spde(const ModelSpec& model, const Grid& grid, double theta,
                     const Control* control, const NoiseStream* stream, SolveStats* stats,
                     NoiseRefinement refinement) {
  PathField path{grid, {}};
  path.slices.reserve(grid.nt + 1);
  solve_spde_visit(
      model, grid, theta, control, stream,
      [&](std::size_t step, std::span<const double> u) {
        path.slices.push_back(Field{std::vector<double>(u.begin(), u.end()), grid.t(step)});
      },
      stats, refinement);
  return path;
}

PathField deterministic_limit(const ModelSpec& model, const Grid& grid) {
  return solve_spde(model, grid, 0.0, nullptr, nullptr);
}

PathField solve_controlled(const ModelSpec& model, const Control& h, const Grid& grid) {
  return solve_spde(model, grid, 0.0, &h, nullptr);
}

}  // namespace ldp
