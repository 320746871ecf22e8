#include "ldp/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "ldp/error.hpp"
#include "ldp/measure.hpp"
#include "ldp/solver.hpp"

namespace ldp {

double terminal_mean(std::span<const double> u, const Grid& grid) {
  if (u.size() != grid.ny) throw ValidationError("terminal_mean: field size != ny");
  const double dx = grid.dx();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) s += (u[i + 1] - u[i]) * (grid.y(i) + 0.5 * dx);
  return s;
}

double TerminalEvent::violation(std::span<const double> u, const Grid& grid) const {
  if (kind == Kind::mean_shift) {
    const double gap = std::max(0.0, target_mean - terminal_mean(u, grid));
    return gap * gap;
  }
  if (target_field.size() != u.size()) throw ValidationError("event: target field size != ny");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - target_field[i]) * (u[i] - target_field[i]);
  return s * grid.dx();
}

void TerminalEvent::violation_gradient(std::span<const double> u, const Grid& grid,
                                       std::span<double> out) const {
  const std::size_t n = u.size();
  const double dx = grid.dx();
  if (kind == Kind::mean_shift) {
    const double gap = std::max(0.0, target_mean - terminal_mean(u, grid));
    // dM/du_i = mid_{i-1} - mid_i.
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i > 0 ? grid.y(i - 1) + 0.5 * dx : 0.0;
      const double right = i + 1 < n ? grid.y(i) + 0.5 * dx : 0.0;
      out[i] = -2.0 * gap * (left - right);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * (u[i] - target_field[i]) * dx;
}

double penalized_objective(const ModelSpec& model, const Grid& grid, const TerminalEvent& event,
                           const Control& h, double weight, Control* grad) {
  if (model.kind == ModelKind::custom) {
    throw ValidationError("penalized_objective: the adjoint needs the sbm or fvp coefficient");
  }
  const std::size_t ny = grid.ny;
  const std::size_t na = grid.na;
  const double dt = grid.dt();
  std::vector<double> traj;
  traj.reserve((grid.nt + 1) * ny);
  solve_spde_visit(model, grid, 0.0, &h, nullptr, [&](std::size_t, std::span<const double> u) {
    traj.insert(traj.end(), u.begin(), u.end());
  });
  const auto slice = [&](std::size_t n) { return std::span<const double>(traj.data() + n * ny, ny); };
  const double viol = event.violation(slice(grid.nt), grid);
  const double value = control_energy(h) + weight * viol;
  if (grad == nullptr) return value;

  *grad = Control(grid);
  std::vector<double> lambda(ny), mu(ny), du(ny), cells(na), row(na);
  event.violation_gradient(slice(grid.nt), grid, lambda);
  for (double& v : lambda) v *= weight;

  HeatStepper heat(grid, dt);
  IndicatorIntegral integral(model, grid);
  for (std::size_t n = grid.nt; n-- > 0;) {
    mu = lambda;
    heat.apply_transpose_in_place(mu);
    if (model.kind == ModelKind::fvp) {
      mu.front() = 0.0;
      mu.back() = 0.0;
    }
    const auto hn = h.row(n);
    for (std::size_t k = 0; k < na; ++k) cells[k] = dt * hn[k];
    integral.set_cells(cells);
    const auto un = slice(n);
    integral.derivative_u(un, du);
    std::fill(row.begin(), row.end(), 0.0);
    integral.accumulate_transpose(un, mu, row);
    auto g = grad->row(n);
    for (std::size_t k = 0; k < na; ++k) g[k] = dt * row[k] + hn[k] * dt * grid.da();
    for (std::size_t i = 0; i < ny; ++i) lambda[i] = mu[i] + du[i] * mu[i];
  }
  return value;
}

namespace {

struct Evaluation {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> grad;  // normalized coordinates k = h sqrt(dt da)
  bool ok = false;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void project_ball(std::vector<double>& k, double budget) {
  if (!std::isfinite(budget)) return;
  const double e = 0.5 * dot(k, k);
  if (e <= budget) return;
  const double s = std::sqrt(budget / e);
  for (double& v : k) v *= s;
}

}  // namespace

MinimizeResult minimize_rate(const ModelSpec& model, const Grid& grid, const TerminalEvent& event,
                             const MinimizeOptions& opts) {
  check_compatible(model, grid);
  if (opts.penalty_ladder.empty()) throw ValidationError("minimize_rate: empty penalty ladder");
  const double scale = std::sqrt(grid.dt() * grid.da());  // h = k / scale
  Control h = opts.warm_start ? *opts.warm_start : Control(grid);
  h.check(grid);
  std::vector<double> k(h.values);
  for (double& v : k) v *= scale;
  project_ball(k, opts.energy_budget);

  const auto evaluate = [&](const std::vector<double>& kk, double weight) {
    Evaluation ev;
    Control hh(grid);
    for (std::size_t i = 0; i < kk.size(); ++i) hh.values[i] = kk[i] / scale;
    Control g;
    try {
      ev.value = penalized_objective(model, grid, event, hh, weight, &g);
    } catch (const NumericalError&) {
      return ev;  // left the noise window or blew up: reject the trial point
    }
    ev.grad = g.values;
    for (double& v : ev.grad) v /= scale;
    ev.ok = std::isfinite(ev.value);
    return ev;
  };

  MinimizeResult res;
  for (std::size_t stage = 0; stage < opts.penalty_ladder.size(); ++stage) {
    const double w = opts.penalty_ladder[stage];
    Evaluation cur = evaluate(k, w);
    if (!cur.ok) throw NumericalError("minimize_rate: starting point is infeasible");
    double step = 1.0;
    std::vector<double> prev_k, prev_g;
    bool converged = false;
    std::size_t stalled = 0;
    std::size_t it = 0;
    for (; it < opts.max_iter; ++it) {
      const double gnorm = std::sqrt(dot(cur.grad, cur.grad));
      {
        Control hh(grid);
        for (std::size_t i = 0; i < k.size(); ++i) hh.values[i] = k[i] / scale;
        const double e = control_energy(hh);
        res.trace.push_back({stage, it, w, cur.value, e, (cur.value - e) / w});
      }
      if (gnorm <= opts.grad_tol) {
        converged = true;
        break;
      }
      if (!prev_k.empty()) {
        double sy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) {
          const double s = k[i] - prev_k[i];
          const double y = cur.grad[i] - prev_g[i];
          sy += s * y;
          ss += s * s;
        }
        step = sy > 0.0 ? ss / sy : std::min(1.0, 10.0 * step);
      }
      std::vector<double> trial(k.size());
      Evaluation next;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t i = 0; i < k.size(); ++i) trial[i] = k[i] - step * cur.grad[i];
        project_ball(trial, opts.energy_budget);
        next = evaluate(trial, w);
        double decrease = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) decrease += cur.grad[i] * (k[i] - trial[i]);
        if (next.ok && next.value <= cur.value - 1e-4 * decrease) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = true;  // no descent available at machine precision
        break;
      }
      const double gain = cur.value - next.value;
      stalled = gain <= opts.rel_tol * std::abs(cur.value) ? stalled + 1 : 0;
      prev_k = k;
      prev_g = cur.grad;
      k = trial;
      cur = std::move(next);
      if (stalled >= opts.stall_iters) {
        converged = true;
        ++it;
        break;
      }
    }
    res.iterations += it;
    res.converged = converged;
    Control hh(grid);
    for (std::size_t i = 0; i < k.size(); ++i) hh.values[i] = k[i] / scale;
    res.stage_energy.push_back(control_energy(hh));
  }

  res.h = Control(grid);
  for (std::size_t i = 0; i < k.size(); ++i) res.h.values[i] = k[i] / scale;
  res.energy = control_energy(res.h);
  const PathField path = solve_controlled(model, res.h, grid);
  res.violation = event.violation(path.terminal().values, grid);
  res.report = rate_density(density_path(path, model.kind == ModelKind::fvp), model.kind);
  res.report.i_energy = res.energy;
  return res;
}

}  // namespace ldp
