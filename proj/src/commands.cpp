#include "ldp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ldp/error.hpp"
#include "ldp/experiments.hpp"
#include "ldp/io.hpp"
#include "ldp/measure.hpp"
#include "ldp/metrics.hpp"
#include "ldp/optimize.hpp"
#include "ldp/particles.hpp"
#include "ldp/rate.hpp"
#include "ldp/solver.hpp"

namespace ldp {

namespace {

using ojson = nlohmann::ordered_json;

// JSON has no nan/inf; they are written as strings so the summary stays valid.
ojson num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

std::size_t snapshot_stride(const Grid& g) { return std::max<std::size_t>(1, g.nt / 10); }

bool is_snapshot(std::size_t step, const Grid& g) {
  return step % snapshot_stride(g) == 0 || step == g.nt;
}

AtomMeasure measure_of(std::span<const double> u, const Grid& g, ModelKind kind) {
  return kind == ModelKind::fvp ? psi_map(u, g) : xi_map(u, g);
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_simulate(const Config& cfg) {
  const Setup s = resolve(cfg);
  const Grid& g = s.grid;
  const NoiseStream stream(s.seed, cfg.count("noise.realization"));
  const bool snapshots = cfg.flag("experiment.snapshots");

  Table path{{"t", "y", "u"}, {}};
  Table measures{{"t", "y", "mass"}, {}};
  std::vector<double> terminal;
  SolveStats st;
  solve_spde_visit(
      s.model, g, std::sqrt(s.model.epsilon), nullptr, &stream,
      [&](std::size_t step, std::span<const double> u) {
        if (step == g.nt) terminal.assign(u.begin(), u.end());
        if (!snapshots || !is_snapshot(step, g)) return;
        const std::string t = fmt(g.t(step));
        for (std::size_t i = 0; i < g.ny; ++i) path.add({t, fmt(g.y(i)), fmt(u[i])});
        const AtomMeasure mu = measure_of(u, g, s.model.kind);
        for (std::size_t i = 0; i < mu.positions.size(); ++i) {
          measures.add({t, fmt(mu.positions[i]), fmt(mu.masses[i])});
        }
      },
      &st, s.refinement);

  const PathField center = deterministic_limit(s.model, g);
  const std::vector<double>& u0 = center.terminal().values;
  Table term{{"y", "u", "u0"}, {}};
  for (std::size_t i = 0; i < g.ny; ++i) term.add({fmt(g.y(i)), fmt(terminal[i]), fmt(u0[i])});

  CommandOutput out;
  out.files.emplace_back("terminal.csv", term.to_csv());
  if (snapshots) {
    out.files.emplace_back("path.csv", path.to_csv());
    out.files.emplace_back("measures.csv", measures.to_csv());
  }
  out.results["terminal_mean"] = num(terminal_mean(terminal, g));
  out.results["center_terminal_mean"] = num(terminal_mean(u0, g));
  out.results["projection_l1"] = num(st.projection_l1);
  out.results["max_projection_l1"] = num(st.max_projection_l1);
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_rate(const Config& cfg) {
  const Setup s = resolve(cfg);
  const Grid& g = s.grid;
  const std::string source = cfg.text("experiment.control");
  const Control h = source.empty() ? Control(g) : parse_control_csv(read_text(source), g);

  const PathField p = solve_controlled(s.model, h, g);
  const MeasurePath mp = density_path(p, s.model.kind == ModelKind::fvp);
  const RateReport r = rate_density(mp, s.model.kind);
  const double energy = control_energy(h);

  Table psi{{"t", "y", "density", "psi"}, {}};
  for (std::size_t n = 0; n < mp.steps(); ++n) {
    if (!is_snapshot(n, g)) continue;
    for (std::size_t i = 0; i < g.ny; ++i) {
      psi.add({fmt(mp.times[n]), fmt(g.y(i)), fmt(mp.density[n][i]), fmt(r.psi[n][i])});
    }
  }
  Table summary{{"quantity", "value"}, {}};
  summary.add({"i_energy", fmt(energy)});
  summary.add({"i_density", fmt(r.i_density)});
  summary.add({"relative_gap", fmt(energy > 0.0 ? (r.i_density - energy) / energy : 0.0)});
  summary.add({"floor_mass", fmt(r.floor_mass)});
  summary.add({"max_centering_residual", fmt(r.max_centering_residual)});
  summary.add({"cameron_martin_pass", r.cm.all_pass() ? "1" : "0"});

  CommandOutput out;
  out.files.emplace_back("rate.csv", summary.to_csv());
  out.files.emplace_back("psi.csv", psi.to_csv());
  out.results["i_energy"] = num(energy);
  out.results["i_density"] = num(r.i_density);
  out.results["cameron_martin_pass"] = r.cm.all_pass();
  return out;
}

// ---------------------------------------------------------------------------------------------

MinimizeOptions minimize_options(const Config& cfg) {
  MinimizeOptions o;
  o.max_iter = cfg.count("experiment.max_iter");
  const double budget = cfg.number("experiment.energy_budget");
  if (budget > 0.0) o.energy_budget = budget;
  return o;
}

CommandOutput cmd_minimize(const Config& cfg) {
  const Setup s = resolve(cfg);
  const Grid& g = s.grid;
  const double center = terminal_mean(deterministic_limit(s.model, g).terminal().values, g);
  const double target = center + cfg.number("experiment.delta");
  const MinimizeResult r =
      minimize_rate(s.model, g, TerminalEvent::mean_at_least(target), minimize_options(cfg));

  Table trace{{"stage", "iteration", "weight", "objective", "energy", "violation"}, {}};
  for (const auto& row : r.trace) {
    trace.add({fmt(row.stage), fmt(row.iteration), fmt(row.weight), fmt(row.objective),
               fmt(row.energy), fmt(row.violation)});
  }
  Table result{{"center_mean", "target_mean", "energy", "violation", "converged", "iterations"}, {}};
  result.add({fmt(center), fmt(target), fmt(r.energy), fmt(r.violation), r.converged ? "1" : "0",
              fmt(r.iterations)});

  CommandOutput out;
  out.files.emplace_back("minimize.csv", result.to_csv());
  out.files.emplace_back("trace.csv", trace.to_csv());
  out.files.emplace_back("control.csv", control_csv(r.h, g));
  out.results["i_star"] = num(r.energy);
  out.results["violation"] = num(r.violation);
  out.results["converged"] = r.converged;
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_ldp_scan(const Config& cfg) {
  const Setup s = resolve(cfg);
  CommandOutput out;
  if (cfg.flag("experiment.bracket")) {
    BracketConfig b;
    b.model = s.model;
    b.grid = s.grid;
    b.delta = cfg.number("experiment.delta");
    b.epsilons = cfg.list("experiment.epsilons");
    b.realizations = cfg.count("experiment.realizations");
    b.seed = s.seed;
    b.minimize = minimize_options(cfg);
    b.refinement = s.refinement;
    b.threads = s.threads;
    const BracketReport r = variational_bracket(b);
    out.files.emplace_back("ldp_scan.csv", r.scan.table().to_csv());
    out.files.emplace_back("bracket.csv", r.table().to_csv());
    out.files.emplace_back("control.csv", control_csv(r.variational.h, s.grid));
    out.results["mc_exponent"] = num(r.mc_exponent);
    out.results["i_star"] = num(r.i_star);
    out.results["ratio"] = num(r.ratio);
    out.results["pass"] = r.pass;
    return out;
  }
  LdpScanConfig c;
  c.model = s.model;
  c.grid = s.grid;
  c.epsilons = cfg.list("experiment.epsilons");
  c.deltas = cfg.list("experiment.deltas");
  c.realizations = cfg.count("experiment.realizations");
  c.seed = s.seed;
  c.deviation = parse_deviation(cfg.text("experiment.deviation"));
  c.params = s.metric;
  c.refinement = s.refinement;
  c.threads = s.threads;
  const LdpScanResult r = run_ldp_scan(c);
  out.files.emplace_back("ldp_scan.csv", r.table().to_csv());
  out.files.emplace_back("spread.csv", r.spread_table().to_csv());
  ojson spread = ojson::array();
  for (double v : r.spread) spread.push_back(num(v));
  out.results["relative_spread"] = spread;
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_convergence(const Config& cfg) {
  const Setup s = resolve(cfg);
  ConvergenceConfig c;
  c.model = s.model;
  c.grid = s.grid;
  c.epsilons = cfg.list("experiment.epsilons");
  c.realizations = cfg.count("experiment.realizations");
  c.seed = s.seed;
  c.deviation = parse_deviation(cfg.text("experiment.deviation"));
  c.params = s.metric;
  c.refinement = s.refinement;
  c.threads = s.threads;
  const ConvergenceResult r = run_convergence_scan(c);

  Table fit{{"slope", "slope_ci_low", "slope_ci_high", "r2", "points"}, {}};
  fit.add({fmt(r.fit.slope), fmt(r.slope_ci_low), fmt(r.slope_ci_high), fmt(r.fit.r2), fmt(r.fit.n)});
  CommandOutput out;
  out.files.emplace_back("convergence.csv", r.table().to_csv());
  out.files.emplace_back("convergence_fit.csv", fit.to_csv());
  out.results["slope"] = num(r.fit.slope);
  out.results["slope_ci"] = {num(r.slope_ci_low), num(r.slope_ci_high)};
  out.results["r2"] = num(r.fit.r2);
  return out;
}

// ---------------------------------------------------------------------------------------------

ParticleOptions particle_options(const Config& cfg) {
  ParticleOptions o;
  o.refinement = cfg.count("experiment.particle_refinement");
  o.rate_multiplier = cfg.number("experiment.rate_multiplier");
  o.stratified = cfg.flag("experiment.stratified");
  return o;
}

CommandOutput cmd_particles(const Config& cfg) {
  const Setup s = resolve(cfg);
  if (s.model.kind == ModelKind::custom) throw ValidationError("particles: model.kind must be sbm or fvp");
  Grid g = s.grid;
  if (const std::size_t pnt = cfg.count("experiment.particle_nt"); pnt > 0) g.nt = pnt;
  const ParticleOptions opts = particle_options(cfg);
  const NoiseStream stream(mix_seed(s.seed, 0x5041525449434c45ULL), cfg.count("noise.realization"));
  const AtomMeasure mu0 = measure_of(initial_field(s.model, g).values, g, s.model.kind);

  Table snaps{{"t", "position", "mass"}, {}};
  Table totals{{"t", "particles", "total_mass"}, {}};
  const ParticleVisitor visit = [&](std::size_t step, std::span<const double> x, double mass) {
    if (!is_snapshot(step, g)) return;
    const std::string t = fmt(g.t(step));
    totals.add({t, fmt(x.size()), fmt(mass * static_cast<double>(x.size()))});
    for (double xi : x) snaps.add({t, fmt(xi), fmt(mass)});
  };

  CommandOutput out;
  if (s.model.kind == ModelKind::sbm) {
    simulate_sbm_visit(mu0, s.model.epsilon, stream, g, opts, visit);
  } else {
    MoranQv qv{[](double x) { return std::tanh(x); }, 0.0, 0.0, 0};
    simulate_moran_visit(mu0, s.model.epsilon, stream, g, opts, visit, &qv);
    out.results["qv_function"] = "tanh";
    out.results["jump_qv"] = num(qv.jump_qv);
    out.results["predicted_qv"] = num(s.model.epsilon * qv.variance_integral);
    out.results["resampling_events"] = qv.events;
  }
  out.files.emplace_back("totals.csv", totals.to_csv());
  out.files.emplace_back("particles.csv", snaps.to_csv());
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_kolmogorov(const Config& cfg) {
  const Setup s = resolve(cfg);
  KolmogorovConfig c;
  c.model = s.model;
  c.grid = s.grid;
  c.moment = cfg.count("experiment.moment");
  c.realizations = cfg.count("experiment.realizations");
  c.seed = s.seed;
  c.lag_min = cfg.number("experiment.lag_min");
  c.lag_max = cfg.number("experiment.lag_max");
  c.lag_levels = cfg.count("experiment.lag_levels");
  c.directions = cfg.count("experiment.directions");
  c.lattice = cfg.count("experiment.lattice");
  c.y_low = cfg.number("experiment.y_low");
  c.y_high = cfg.number("experiment.y_high");
  c.beta1 = s.metric.beta1;
  c.refinement = s.refinement;
  c.threads = s.threads;
  const KolmogorovReport r = kolmogorov_fit(c);

  Table fit{{"exponent", "q_hat", "q_ci_half", "r2"}, {}};
  fit.add({fmt(r.exponent), fmt(r.q_hat), fmt(r.q_ci_half), fmt(r.fit.r2)});
  CommandOutput out;
  out.files.emplace_back("kolmogorov.csv", r.table().to_csv());
  out.files.emplace_back("kolmogorov_fit.csv", fit.to_csv());
  out.results["q_hat"] = num(r.q_hat);
  out.results["q_ci_half"] = num(r.q_ci_half);
  out.results["r2"] = num(r.fit.r2);
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_compare(const Config& cfg) {
  const Setup s = resolve(cfg);
  CompareConfig c;
  c.model = s.model;
  c.grid = s.grid;
  c.epsilons = cfg.list("experiment.epsilons");
  c.times = cfg.list("experiment.times");
  c.realizations = cfg.count("experiment.realizations");
  c.seed = s.seed;
  c.particles = particle_options(cfg);
  c.particle_nt = cfg.count("experiment.particle_nt");
  c.refinement = s.refinement;
  c.threads = s.threads;
  const CompareReport r = compare_particles_spde(c);
  CommandOutput out;
  out.files.emplace_back("compare.csv", r.table().to_csv());
  out.results["max_abs_z"] = num(r.max_abs_z);
  out.results["pass"] = r.pass;
  return out;
}

// ---------------------------------------------------------------------------------------------

CommandOutput cmd_metrics(const Config& cfg) {
  const Setup s = resolve(cfg);
  const Grid& g = s.grid;
  const NoiseStream stream(s.seed, cfg.count("noise.realization"));
  std::vector<double> u;
  solve_spde_visit(
      s.model, g, std::sqrt(s.model.epsilon), nullptr, &stream,
      [&](std::size_t step, std::span<const double> v) {
        if (step == g.nt) u.assign(v.begin(), v.end());
      },
      nullptr, s.refinement);
  const std::vector<double> u0 = deterministic_limit(s.model, g).terminal().values;
  std::vector<double> diff(g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) diff[i] = u[i] - u0[i];

  Table profile{{"m", "seminorm"}, {}};
  const std::vector<double> prof = holder_profile(diff, g, s.metric);
  for (std::size_t m = 0; m < prof.size(); ++m) profile.add({fmt(m + 1), fmt(prof[m])});

  const double d = metric_d(u, u0, g, s.metric);
  const double w = weak_metric(measure_of(u, g, s.model.kind), measure_of(u0, g, s.model.kind), s.metric.beta);
  const auto [c0, C0] = sandwich_constants(s.metric.beta);
  Table summary{{"quantity", "value"}, {}};
  summary.add({"metric_d", fmt(d)});
  summary.add({"weak_metric", fmt(w)});
  summary.add({"sandwich_c0", fmt(c0)});
  summary.add({"sandwich_C0", fmt(C0)});

  CommandOutput out;
  out.files.emplace_back("metrics.csv", summary.to_csv());
  out.files.emplace_back("holder_profile.csv", profile.to_csv());
  out.results["metric_d"] = num(d);
  out.results["weak_metric"] = num(w);
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "rate",      "minimize",
                                              "ldp-scan", "convergence", "particles",
                                              "kolmogorov", "compare",  "metrics"};
  return names;
}

std::string command_help(const std::string& name) {
  if (name == "simulate") return "one SPDE realization: terminal field, optional path and measure snapshots";
  if (name == "rate") return "controlled path of a control table and its density-form rate";
  if (name == "minimize") return "minimal energy control for a terminal-mean shift of experiment.delta";
  if (name == "ldp-scan") return "crude MC deviation probabilities over the epsilon ladder (or the bracket)";
  if (name == "convergence") return "E[deviation^2] against epsilon with a log-log fit";
  if (name == "particles") return "one branching or Moran particle realization";
  if (name == "kolmogorov") return "moment regression of path increments";
  if (name == "compare") return "particle system against SPDE moments over the test dictionary";
  if (name == "metrics") return "distances between one realization and the small-noise center";
  throw ValidationError("unknown command '" + name + "'");
}

CommandOutput run_command(const std::string& name, const Config& cfg) {
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "rate") return cmd_rate(cfg);
  if (name == "minimize") return cmd_minimize(cfg);
  if (name == "ldp-scan") return cmd_ldp_scan(cfg);
  if (name == "convergence") return cmd_convergence(cfg);
  if (name == "particles") return cmd_particles(cfg);
  if (name == "kolmogorov") return cmd_kolmogorov(cfg);
  if (name == "compare") return cmd_compare(cfg);
  if (name == "metrics") return cmd_metrics(cfg);
  throw ValidationError("unknown command '" + name + "'");
}

std::string outputs_hash(const CommandOutput& out) {
  std::string listing;
  for (const auto& [file, content] : out.files) listing += file + "\n" + git_blob_hash(content) + "\n";
  return git_blob_hash(listing);
}

nlohmann::ordered_json write_run(const std::filesystem::path& dir, const std::string& name,
                                 const Config& cfg, const CommandOutput& out, double wall_seconds) {
  ojson files = ojson::object();
  for (const auto& [file, content] : out.files) {
    write_text(dir / file, content);
    files[file] = git_blob_hash(content);
  }
  ojson summary;
  summary["command"] = name;
  summary["config"] = cfg.values();
  summary["seed"] = cfg.seed("noise.seed");
  summary["config_hash"] = git_blob_hash(cfg.dump());
  summary["outputs"] = files;
  summary["content_hash"] = outputs_hash(out);
  summary["results"] = out.results;
  summary["wall_time_s"] = wall_seconds;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

std::string control_csv(const Control& h, const Grid& grid) {
  h.check(grid);
  Table t{{"t", "a", "h"}, {}};
  for (std::size_t n = 0; n < h.nt; ++n) {
    for (std::size_t k = 0; k < h.na; ++k) t.add({fmt(grid.t(n)), fmt(grid.a_mid(k)), fmt(h.at(n, k))});
  }
  return t.to_csv();
}

Control parse_control_csv(const std::string& csv, const Grid& grid) {
  Control h(grid);
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "t,a,h") throw ValidationError("control table: expected header t,a,h");
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos || idx >= h.values.size()) {
      throw ValidationError("control table: expected " + std::to_string(h.values.size()) + " rows of t,a,h");
    }
    h.values[idx++] = std::stod(line.substr(last + 1));
  }
  if (idx != h.values.size()) {
    throw ValidationError("control table: " + std::to_string(idx) + " rows, grid needs " +
                          std::to_string(h.values.size()));
  }
  return h;
}

}  // namespace ldp
