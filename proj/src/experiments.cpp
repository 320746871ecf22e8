#include "ldp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldp/error.hpp"
#include "ldp/measure.hpp"
#include "ldp/noise.hpp"
#include "ldp/parallel.hpp"
#include "ldp/simd.hpp"
#include "ldp/solver.hpp"

namespace ldp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Realizations per work item; fixed so the block layout never depends on the thread count.
constexpr std::size_t kBlock = 16;

// Particle systems draw from a root distinct from the SPDE noise.
constexpr std::uint64_t kParticleSalt = 0x5041525449434c45ULL;

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

ModelSpec at_epsilon(ModelSpec model, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("epsilon must be >= 0");
  model.epsilon = eps;
  return model;
}

std::size_t step_for_time(const Grid& grid, double t) {
  if (t < 0.0 || t > grid.T * (1.0 + 1e-12)) {
    throw ValidationError("observation time " + fmt(t) + " outside [0, T]");
  }
  return std::min<std::size_t>(grid.nt, static_cast<std::size_t>(std::llround(t / grid.dt())));
}

}  // namespace

Deviation parse_deviation(const std::string& name) {
  if (name == "weighted-sup" || name == "weighted_sup") return Deviation::weighted_sup;
  if (name == "metric") return Deviation::metric;
  if (name == "terminal-mean" || name == "terminal_mean") return Deviation::terminal_mean;
  throw ValidationError("unknown deviation functional '" + name + "'");
}

std::string to_string(Deviation d) {
  switch (d) {
    case Deviation::weighted_sup: return "weighted-sup";
    case Deviation::metric: return "metric";
    case Deviation::terminal_mean: return "terminal-mean";
  }
  return "?";
}

DeviationFunctional::DeviationFunctional(const ModelSpec& model, const Grid& grid, Deviation kind,
                                         const MetricParams& params, std::size_t metric_stride)
    : grid_(grid), kind_(kind), params_(params) {
  params_.validate();
  stride_ = metric_stride ? metric_stride : std::max<std::size_t>(1, grid.nt / 10);
  const PathField center = deterministic_limit(model, grid);
  center_.reserve(center.slices.size());
  for (const auto& s : center.slices) center_.push_back(s.values);
  weight_.resize(grid.ny);
  for (std::size_t i = 0; i < grid.ny; ++i) weight_[i] = std::exp(-params_.beta * std::abs(grid.y(i)));
  center_mean_ = terminal_mean(center_.back(), grid);
}

void DeviationFunctional::observe(std::size_t step, std::span<const double> u, double& acc) const {
  switch (kind_) {
    case Deviation::weighted_sup:
      acc = std::max(acc, simd::weighted_max_abs_diff(u, center_[step], weight_));
      break;
    case Deviation::metric:
      if (step % stride_ == 0 || step == grid_.nt) {
        acc = std::max(acc, metric_d(u, center_[step], grid_, params_));
      }
      break;
    case Deviation::terminal_mean:
      if (step == grid_.nt) acc = terminal_mean(u, grid_) - center_mean_;
      break;
  }
}

namespace {

std::vector<double> samples_with(const DeviationFunctional& dev, const ModelSpec& model,
                                 const Grid& grid, std::size_t realizations, std::uint64_t seed,
                                 std::size_t threads, NoiseRefinement refinement) {
  std::vector<double> out(realizations, 0.0);
  const double theta = std::sqrt(model.epsilon);
  parallel_for(
      block_count(realizations),
      [&](std::size_t b) {
        SpdeSolver solver(model, grid, refinement);
        const std::size_t end = std::min(realizations, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
          const NoiseStream stream(seed, r);
          double acc = 0.0;
          solver.run(theta, nullptr, theta > 0.0 ? &stream : nullptr,
                     [&](std::size_t step, std::span<const double> u) { dev.observe(step, u, acc); });
          out[r] = acc;
        }
      },
      threads);
  return out;
}

}  // namespace

std::vector<double> deviation_samples(const ModelSpec& model, const Grid& grid, double epsilon,
                                      Deviation kind, const MetricParams& params,
                                      std::size_t realizations, std::uint64_t seed,
                                      std::size_t threads, NoiseRefinement refinement) {
  const ModelSpec m = at_epsilon(model, epsilon);
  const DeviationFunctional dev(m, grid, kind, params);
  return samples_with(dev, m, grid, realizations, seed, threads, refinement);
}

// ---------------------------------------------------------------------------------------------
// convergence

ConvergenceResult run_convergence_scan(const ConvergenceConfig& cfg) {
  if (cfg.epsilons.empty()) throw ValidationError("convergence: empty epsilon ladder");
  if (cfg.realizations < 2) throw ValidationError("convergence: need at least 2 realizations");
  ConvergenceResult res;
  const DeviationFunctional dev(cfg.model, cfg.grid, cfg.deviation, cfg.params);
  std::vector<double> lx, ly;
  for (double eps : cfg.epsilons) {
    const ModelSpec m = at_epsilon(cfg.model, eps);
    std::vector<double> d = samples_with(dev, m, cfg.grid, cfg.realizations, cfg.seed, cfg.threads, cfg.refinement);
    for (double& v : d) v *= v;
    ConvergenceRow row{eps, stats::mean(d), stats::std_error(d), d.size()};
    res.rows.push_back(row);
    if (eps > 0.0 && row.mean_dev2 > 0.0) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(row.mean_dev2));
    }
  }
  if (lx.size() >= 2) {
    res.fit = stats::ols(lx, ly);
    const double half = stats::t95(lx.size() > 2 ? lx.size() - 2 : 0) * res.fit.slope_se;
    res.slope_ci_low = res.fit.slope - half;
    res.slope_ci_high = res.fit.slope + half;
  } else {
    res.fit.slope = res.slope_ci_low = res.slope_ci_high = kNaN;
  }
  return res;
}

Table ConvergenceResult::table() const {
  Table t{{"epsilon", "mean_dev2", "std_error", "realizations"}, {}};
  for (const auto& r : rows) t.add({fmt(r.epsilon), fmt(r.mean_dev2), fmt(r.std_error), fmt(r.realizations)});
  return t;
}

// ---------------------------------------------------------------------------------------------
// LDP scan

LdpScanResult run_ldp_scan(const LdpScanConfig& cfg) {
  if (cfg.epsilons.empty() || cfg.deltas.empty()) throw ValidationError("ldp scan: empty ladder");
  if (cfg.realizations == 0) throw ValidationError("ldp scan: need realizations");
  LdpScanResult res;
  res.deltas = cfg.deltas;
  const DeviationFunctional dev(cfg.model, cfg.grid, cfg.deviation, cfg.params);
  for (double eps : cfg.epsilons) {
    const ModelSpec m = at_epsilon(cfg.model, eps);
    const std::vector<double> s = samples_with(dev, m, cfg.grid, cfg.realizations, cfg.seed, cfg.threads, cfg.refinement);
    for (double delta : cfg.deltas) {
      LdpRow row;
      row.epsilon = eps;
      row.delta = delta;
      row.realizations = s.size();
      row.hits = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= delta; }));
      row.p_hat = static_cast<double>(row.hits) / static_cast<double>(row.realizations);
      std::tie(row.ci_low, row.ci_high) = stats::wilson_interval(row.hits, row.realizations);
      row.feasible = row.hits >= 10;
      row.exponent = row.feasible ? std::max(0.0, -eps * std::log(row.p_hat)) : kNaN;
      res.rows.push_back(row);
    }
  }
  const std::size_t ne = cfg.epsilons.size(), nd = cfg.deltas.size();
  for (std::size_t d = 0; d < nd; ++d) {
    if (ne < 3) {
      res.spread.push_back(kNaN);
      continue;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    bool ok = true;
    for (std::size_t e = ne - 3; e < ne; ++e) {
      const LdpRow& r = res.rows[e * nd + d];
      if (!r.feasible) ok = false;
      lo = std::min(lo, r.exponent);
      hi = std::max(hi, r.exponent);
      sum += r.exponent;
    }
    const double mean = sum / 3.0;
    res.spread.push_back(ok && mean > 0.0 ? (hi - lo) / mean : kNaN);
  }
  return res;
}

Table LdpScanResult::table() const {
  Table t{{"epsilon", "delta", "hits", "realizations", "p_hat", "ci_low", "ci_high", "feasible", "exponent"}, {}};
  for (const auto& r : rows) {
    t.add({fmt(r.epsilon), fmt(r.delta), fmt(r.hits), fmt(r.realizations), fmt(r.p_hat), fmt(r.ci_low),
           fmt(r.ci_high), r.feasible ? "1" : "0", fmt(r.exponent)});
  }
  return t;
}

Table LdpScanResult::spread_table() const {
  Table t{{"delta", "relative_spread"}, {}};
  for (std::size_t d = 0; d < deltas.size(); ++d) t.add({fmt(deltas[d]), fmt(spread[d])});
  return t;
}

// ---------------------------------------------------------------------------------------------
// variational bracket

BracketReport variational_bracket(const BracketConfig& cfg) {
  if (cfg.model.kind != ModelKind::fvp) throw ValidationError("bracket: the toy event is defined for fvp");
  BracketReport rep;
  LdpScanConfig scan;
  scan.model = cfg.model;
  scan.grid = cfg.grid;
  scan.epsilons = cfg.epsilons;
  scan.deltas = {cfg.delta};
  scan.realizations = cfg.realizations;
  scan.seed = cfg.seed;
  scan.deviation = Deviation::terminal_mean;
  scan.threads = cfg.threads;
  scan.refinement = cfg.refinement;
  rep.scan = run_ldp_scan(scan);

  rep.center_mean = terminal_mean(deterministic_limit(cfg.model, cfg.grid).terminal().values, cfg.grid);
  rep.variational = minimize_rate(cfg.model, cfg.grid,
                                  TerminalEvent::mean_at_least(rep.center_mean + cfg.delta), cfg.minimize);
  rep.i_star = rep.variational.energy;

  rep.mc_epsilon = rep.mc_exponent = kNaN;
  for (const auto& r : rep.scan.rows) {
    if (r.feasible && !(r.epsilon >= rep.mc_epsilon)) {
      rep.mc_epsilon = r.epsilon;
      rep.mc_exponent = r.exponent;
    }
  }
  rep.one_sided = std::isnan(rep.mc_exponent);
  rep.ratio = rep.i_star > 0.0 ? rep.mc_exponent / rep.i_star : kNaN;
  rep.pass = !rep.one_sided && rep.mc_exponent <= 1.25 * rep.i_star &&
             rep.i_star <= 2.0 * rep.mc_exponent + 0.05;
  return rep;
}

Table BracketReport::table() const {
  Table t{{"delta", "center_mean", "mc_epsilon", "mc_exponent", "i_star", "ratio", "one_sided",
           "optimizer_converged", "optimizer_violation", "pass"},
          {}};
  t.add({fmt(scan.deltas.empty() ? kNaN : scan.deltas[0]), fmt(center_mean), fmt(mc_epsilon), fmt(mc_exponent),
         fmt(i_star), fmt(ratio), one_sided ? "1" : "0", variational.converged ? "1" : "0",
         fmt(variational.violation), pass ? "1" : "0"});
  return t;
}

// ---------------------------------------------------------------------------------------------
// Kolmogorov regression

namespace {

struct PairIndex {
  std::size_t s1, i1, s2, i2;
  double weight;  // e^{-n beta1 max(|y1|, |y2|)}
  double distance;
  std::size_t level;
};

}  // namespace

KolmogorovReport kolmogorov_fit(const KolmogorovConfig& cfg) {
  const Grid& g = cfg.grid;
  if (cfg.moment == 0 || cfg.moment % 2 != 0) throw ValidationError("kolmogorov: moment must be even and positive");
  if (cfg.lag_levels < 2 || cfg.directions < 1 || cfg.lattice < 1 || cfg.realizations < 1) {
    throw ValidationError("kolmogorov: need >= 2 lag levels, >= 1 direction, lattice and realization");
  }
  if (!(cfg.lag_min > 0.0) || !(cfg.lag_max >= cfg.lag_min)) throw ValidationError("kolmogorov: bad lag range");
  if (!(cfg.y_low < cfg.y_high) || cfg.y_low < -g.L || cfg.y_high > g.L) {
    throw ValidationError("kolmogorov: y range must be inside [-L, L]");
  }
  const double n = static_cast<double>(cfg.moment);
  const auto space_index = [&](double y) {
    return std::min<std::size_t>(g.ny - 1, static_cast<std::size_t>(std::llround((y + g.L) / g.dx())));
  };

  std::vector<PairIndex> pairs;
  std::vector<double> lags(cfg.lag_levels);
  for (std::size_t l = 0; l < cfg.lag_levels; ++l) {
    const double r = std::exp(std::log(cfg.lag_min) + (std::log(cfg.lag_max) - std::log(cfg.lag_min)) *
                                                          static_cast<double>(l) /
                                                          static_cast<double>(cfg.lag_levels - 1));
    lags[l] = r;
    for (std::size_t k = 0; k < cfg.directions; ++k) {
      const double f = (static_cast<double>(k) + 0.5) / static_cast<double>(cfg.directions);
      const double dy = r * f, dtt = r * (1.0 - f);
      if (dtt > g.T || cfg.y_low + dy > cfg.y_high) continue;
      const std::size_t ds = static_cast<std::size_t>(std::llround(dtt / g.dt()));
      const std::size_t di = static_cast<std::size_t>(std::llround(dy / g.dx()));
      for (std::size_t b = 0; b < cfg.lattice; ++b) {
        for (std::size_t c = 0; c < cfg.lattice; ++c) {
          const double fb = (static_cast<double>(b) + 0.5) / static_cast<double>(cfg.lattice);
          const double fc = (static_cast<double>(c) + 0.5) / static_cast<double>(cfg.lattice);
          const double t1 = (g.T - dtt) * fb;
          const double y1 = cfg.y_low + (cfg.y_high - cfg.y_low - dy) * fc;
          PairIndex p;
          p.s1 = std::min<std::size_t>(g.nt, static_cast<std::size_t>(std::llround(t1 / g.dt())));
          p.i1 = space_index(y1);
          p.s2 = p.s1 + ds;
          p.i2 = p.i1 + di;
          if (p.s2 > g.nt || p.i2 >= g.ny) continue;
          p.distance = std::abs(g.y(p.i2) - g.y(p.i1)) + static_cast<double>(ds) * g.dt();
          if (!(p.distance > 0.0)) continue;
          p.weight = std::exp(-n * cfg.beta1 * std::max(std::abs(g.y(p.i1)), std::abs(g.y(p.i2))));
          p.level = l;
          pairs.push_back(p);
        }
      }
    }
  }
  if (pairs.empty()) throw ValidationError("kolmogorov: the design produced no pairs");

  const std::size_t nb = block_count(cfg.realizations);
  std::vector<std::vector<double>> block_sums(nb, std::vector<double>(pairs.size(), 0.0));
  const double theta = std::sqrt(cfg.model.epsilon);
  parallel_for(
      nb,
      [&](std::size_t b) {
        SpdeSolver solver(cfg.model, g, cfg.refinement);
        std::vector<double> path((g.nt + 1) * g.ny);
        auto& sums = block_sums[b];
        const std::size_t end = std::min(cfg.realizations, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
          const NoiseStream stream(cfg.seed, r);
          solver.run(theta, nullptr, theta > 0.0 ? &stream : nullptr,
                     [&](std::size_t step, std::span<const double> u) {
                       std::copy(u.begin(), u.end(), path.begin() + static_cast<std::ptrdiff_t>(step * g.ny));
                     });
          for (std::size_t p = 0; p < pairs.size(); ++p) {
            const double d = path[pairs[p].s2 * g.ny + pairs[p].i2] - path[pairs[p].s1 * g.ny + pairs[p].i1];
            sums[p] += std::pow(std::abs(d), n);
          }
        }
      },
      cfg.threads);

  KolmogorovReport rep;
  std::vector<double> level_moment(cfg.lag_levels, 0.0), level_dist(cfg.lag_levels, 0.0);
  std::vector<std::size_t> level_count(cfg.lag_levels, 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double s = 0.0;
    for (std::size_t b = 0; b < nb; ++b) s += block_sums[b][p];
    const double moment = s / static_cast<double>(cfg.realizations);
    level_moment[pairs[p].level] += moment * pairs[p].weight;
    level_dist[pairs[p].level] += pairs[p].distance;
    ++level_count[pairs[p].level];
  }
  std::vector<double> lx, ly;
  for (std::size_t l = 0; l < cfg.lag_levels; ++l) {
    if (level_count[l] == 0) continue;
    KolmogorovRow row{lags[l], level_dist[l] / static_cast<double>(level_count[l]),
                      level_moment[l] / static_cast<double>(level_count[l]), level_count[l]};
    rep.rows.push_back(row);
    if (row.weighted_moment > 0.0) {
      lx.push_back(std::log(row.distance));
      ly.push_back(std::log(row.weighted_moment));
    }
  }
  if (lx.size() < 2) throw ValidationError("kolmogorov: fewer than two lag levels with nonzero moments");
  rep.fit = stats::ols(lx, ly);
  rep.exponent = rep.fit.slope;
  rep.q_hat = rep.exponent - 2.0;
  rep.q_ci_half = stats::t95(lx.size() > 2 ? lx.size() - 2 : 0) * rep.fit.slope_se;
  return rep;
}

Table KolmogorovReport::table() const {
  Table t{{"lag", "distance", "weighted_moment", "pairs"}, {}};
  for (const auto& r : rows) t.add({fmt(r.lag), fmt(r.distance), fmt(r.weighted_moment), fmt(r.pairs)});
  return t;
}

// ---------------------------------------------------------------------------------------------
// particle-vs-SPDE comparison

double z_score(double a, double se_a, double b, double se_b) {
  const double se = std::sqrt(se_a * se_a + se_b * se_b);
  if (se == 0.0) return a == b ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), a - b);
  return (a - b) / se;
}

namespace {

// samples[(r * times + k) * nf + j] = <mu_{t_k}, f_j> for realization r.
using Samples = std::vector<double>;

struct Moments {
  std::vector<double> mean, mean_se, var, var_se;  // [k * nf + j]
};

Moments moments_of(const Samples& s, std::size_t R, std::size_t cells) {
  Moments m;
  std::vector<double> col(R);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t r = 0; r < R; ++r) col[r] = s[r * cells + c];
    m.mean.push_back(stats::mean(col));
    m.mean_se.push_back(stats::std_error(col));
    m.var.push_back(stats::variance(col));
    m.var_se.push_back(stats::variance_std_error(col));
  }
  return m;
}

Samples spde_samples(const ModelSpec& model, const Grid& grid, const std::vector<std::size_t>& steps,
                     std::size_t R, std::uint64_t seed, std::size_t threads,
                     NoiseRefinement refinement) {
  const auto& dict = test_dictionary();
  const std::size_t nf = dict.size(), cells = steps.size() * nf;
  Samples out(R * cells, 0.0);
  const double theta = std::sqrt(model.epsilon);
  parallel_for(
      block_count(R),
      [&](std::size_t b) {
        SpdeSolver solver(model, grid, refinement);
        const std::size_t end = std::min(R, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
          const NoiseStream stream(seed, r);
          solver.run(theta, nullptr, theta > 0.0 ? &stream : nullptr,
                     [&](std::size_t step, std::span<const double> u) {
                       for (std::size_t k = 0; k < steps.size(); ++k) {
                         if (steps[k] != step) continue;
                         const AtomMeasure mu =
                             model.kind == ModelKind::fvp ? psi_map(u, grid) : xi_map(u, grid);
                         for (std::size_t j = 0; j < nf; ++j) out[r * cells + k * nf + j] = mu.integrate(dict[j].f);
                       }
                     });
        }
      },
      threads);
  return out;
}

Samples particle_samples(const ModelSpec& model, const Grid& grid, const std::vector<std::size_t>& steps,
                         std::size_t R, std::uint64_t seed, const ParticleOptions& opts,
                         std::size_t threads) {
  const auto& dict = test_dictionary();
  const std::size_t nf = dict.size(), cells = steps.size() * nf;
  const Field f0 = initial_field(model, grid);
  const AtomMeasure mu0 = model.kind == ModelKind::fvp ? psi_map(f0.values, grid) : xi_map(f0.values, grid);
  const std::uint64_t root = mix_seed(seed, kParticleSalt);
  Samples out(R * cells, 0.0);
  parallel_for(
      block_count(R),
      [&](std::size_t b) {
        const std::size_t end = std::min(R, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
          const NoiseStream stream(root, r);
          const ParticleVisitor visit = [&](std::size_t step, std::span<const double> x, double mass) {
            for (std::size_t k = 0; k < steps.size(); ++k) {
              if (steps[k] != step) continue;
              for (std::size_t j = 0; j < nf; ++j) {
                double s = 0.0;
                for (double p : x) s += dict[j].f(p);
                out[r * cells + k * nf + j] = s * mass;
              }
            }
          };
          if (model.kind == ModelKind::fvp) {
            simulate_moran_visit(mu0, model.epsilon, stream, grid, opts, visit);
          } else {
            simulate_sbm_visit(mu0, model.epsilon, stream, grid, opts, visit);
          }
        }
      },
      threads);
  return out;
}

CompareReport compare_impl(const CompareConfig& cfg, bool spde_twice) {
  if (cfg.model.kind == ModelKind::custom) throw ValidationError("compare: model must be sbm or fvp");
  if (cfg.realizations < 2) throw ValidationError("compare: need at least 2 realizations");
  const auto& dict = test_dictionary();
  const std::size_t nf = dict.size();
  std::vector<std::size_t> steps, particle_steps;
  Grid pgrid = cfg.grid;
  if (cfg.particle_nt != 0) pgrid.nt = cfg.particle_nt;
  for (double t : cfg.times) {
    steps.push_back(step_for_time(cfg.grid, t));
    particle_steps.push_back(step_for_time(pgrid, t));
  }
  const std::size_t cells = steps.size() * nf;

  CompareReport rep;
  for (double eps : cfg.epsilons) {
    if (!(eps > 0.0)) throw ValidationError("compare: epsilon must be positive");
    const ModelSpec m = at_epsilon(cfg.model, eps);
    const Moments a = moments_of(spde_samples(m, cfg.grid, steps, cfg.realizations, cfg.seed, cfg.threads, cfg.refinement),
                                 cfg.realizations, cells);
    const Moments b = moments_of(
        spde_twice ? spde_samples(m, cfg.grid, steps, cfg.realizations, cfg.seed, cfg.threads, cfg.refinement)
                   : particle_samples(m, pgrid, particle_steps, cfg.realizations, cfg.seed, cfg.particles, cfg.threads),
        cfg.realizations, cells);
    for (std::size_t k = 0; k < steps.size(); ++k) {
      for (std::size_t j = 0; j < nf; ++j) {
        const std::size_t c = k * nf + j;
        const double t = cfg.grid.t(steps[k]);
        rep.rows.push_back({eps, t, dict[j].name, "mean", a.mean[c], a.mean_se[c], b.mean[c], b.mean_se[c],
                            z_score(a.mean[c], a.mean_se[c], b.mean[c], b.mean_se[c])});
        rep.rows.push_back({eps, t, dict[j].name, "var", a.var[c], a.var_se[c], b.var[c], b.var_se[c],
                            z_score(a.var[c], a.var_se[c], b.var[c], b.var_se[c])});
      }
    }
  }
  rep.max_abs_z = 0.0;
  for (const auto& r : rep.rows) rep.max_abs_z = std::max(rep.max_abs_z, std::abs(r.z));
  rep.pass = rep.max_abs_z <= 3.0;
  return rep;
}

}  // namespace

CompareReport compare_particles_spde(const CompareConfig& cfg) { return compare_impl(cfg, false); }
CompareReport compare_spde_spde(const CompareConfig& cfg) { return compare_impl(cfg, true); }

Table CompareReport::table() const {
  Table t{{"epsilon", "t", "function", "moment", "spde", "spde_se", "particle", "particle_se", "z"}, {}};
  for (const auto& r : rows) {
    t.add({fmt(r.epsilon), fmt(r.t), r.function, r.moment, fmt(r.spde), fmt(r.spde_se), fmt(r.particle),
           fmt(r.particle_se), fmt(r.z)});
  }
  return t;
}

}  // namespace ldp
