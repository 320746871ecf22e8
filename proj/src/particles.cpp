#include "ldp/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldp/error.hpp"

namespace ldp {

std::vector<double> sample_positions(const AtomMeasure& mu0, std::size_t count, bool stratified,
                                     CounterRng& rng) {
  const std::size_t n = mu0.positions.size();
  if (n == 0 || mu0.masses.size() != n) throw ValidationError("sample_positions: empty measure");
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mu0.masses[k] >= 0.0)) throw ValidationError("sample_positions: negative mass");
    acc += mu0.masses[k];
    cdf[k] = acc;
  }
  if (!(acc > 0.0)) throw ValidationError("sample_positions: zero total mass");
  std::vector<double> out(count);
  for (std::size_t p = 0; p < count; ++p) {
    const double q = stratified ? (static_cast<double>(p) + 0.5) / static_cast<double>(count)
                                : rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), q * acc);
    out[p] = mu0.positions[std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 1)];
  }
  return out;
}

namespace {

std::size_t particle_count(double mass, double unit, std::size_t cap) {
  const double n = std::round(mass / unit);
  if (n > static_cast<double>(cap)) {
    throw ResourceError("particle count " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(cap));
  }
  return static_cast<std::size_t>(n);
}

void check_common(double epsilon, const Grid& grid, const ParticleOptions& opts) {
  grid.validate();
  if (!(epsilon > 0.0)) throw ValidationError("particles: epsilon must be positive");
  if (opts.refinement < 1) throw ValidationError("particles: refinement must be at least 1");
  if (!(opts.rate_multiplier >= 0.0)) throw ValidationError("particles: rate multiplier < 0");
}

}  // namespace

void simulate_sbm_visit(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                        const Grid& grid, const ParticleOptions& opts,
                        const ParticleVisitor& visit) {
  check_common(epsilon, grid, opts);
  const double K = static_cast<double>(opts.refinement);
  const double mass = epsilon / K;
  const double dt = grid.dt();
  const double p_event = opts.branching ? K * opts.rate_multiplier * dt : 0.0;
  if (p_event > 1.0) throw ValidationError("particles: branching probability per step exceeds 1");
  CounterRng rng(stream.key());
  std::vector<double> x =
      sample_positions(mu0, particle_count(mu0.total_mass(), mass, opts.cap), opts.stratified, rng);
  std::vector<double> next;
  const double sd = std::sqrt(dt);
  visit(0, x, mass);
  for (std::size_t step = 0; step < grid.nt; ++step) {
    next.clear();
    for (double xi : x) {
      xi += sd * rng.normal();
      if (p_event > 0.0 && rng.uniform() < p_event) {
        if (rng.uniform() < 0.5) continue;  // death
        next.push_back(xi);                 // split
      }
      next.push_back(xi);
    }
    if (next.size() > opts.cap) {
      throw ResourceError("particle count exceeds the cap " + std::to_string(opts.cap) +
                          " at step " + std::to_string(step + 1));
    }
    x.swap(next);
    visit(step + 1, x, mass);
  }
}

namespace {

MeasurePath record(const Grid& grid, bool probability,
                   const std::function<void(const ParticleVisitor&)>& run) {
  std::vector<double> times;
  std::vector<AtomMeasure> atoms;
  run([&](std::size_t step, std::span<const double> x, double mass) {
    times.push_back(grid.t(step));
    AtomMeasure a;
    a.positions.assign(x.begin(), x.end());
    a.masses.assign(x.size(), mass);
    atoms.push_back(std::move(a));
  });
  return atom_path(grid, std::move(times), std::move(atoms), probability);
}

}  // namespace

MeasurePath simulate_sbm_particles(const AtomMeasure& mu0, double epsilon,
                                   const NoiseStream& stream, const Grid& grid,
                                   const ParticleOptions& opts) {
  return record(grid, false, [&](const ParticleVisitor& v) {
    simulate_sbm_visit(mu0, epsilon, stream, grid, opts, v);
  });
}

void simulate_moran_visit(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                          const Grid& grid, const ParticleOptions& opts,
                          const ParticleVisitor& visit, MoranQv* qv) {
  check_common(epsilon, grid, opts);
  const double K = static_cast<double>(opts.refinement);
  const auto N = static_cast<std::size_t>(std::llround(K / epsilon));
  if (N < 10) throw ValidationError("moran: population N = round(K / eps) must be at least 10");
  if (N > opts.cap) throw ResourceError("moran: population exceeds the cap");
  const double dt = grid.dt();
  const double Nd = static_cast<double>(N);
  const double mean_events =
      opts.resampling ? Nd * (Nd - 1.0) * 0.5 * epsilon * opts.rate_multiplier * dt : 0.0;
  CounterRng rng(stream.key());
  std::vector<double> x = sample_positions(mu0, N, opts.stratified, rng);
  const double mass = 1.0 / Nd;
  const double sd = std::sqrt(dt);
  visit(0, x, mass);
  for (std::size_t step = 0; step < grid.nt; ++step) {
    if (qv != nullptr) {
      double s1 = 0.0, s2 = 0.0;
      for (double xi : x) {
        const double v = qv->f(xi);
        s1 += v;
        s2 += v * v;
      }
      s1 /= Nd;
      s2 /= Nd;
      qv->variance_integral += (s2 - s1 * s1) * dt;
    }
    for (double& xi : x) xi += sd * rng.normal();
    const std::uint64_t events = mean_events > 0.0 ? rng.poisson(mean_events) : 0;
    for (std::uint64_t e = 0; e < events; ++e) {
      const std::size_t i = rng.below(N);
      std::size_t j = rng.below(N - 1);
      if (j >= i) ++j;
      if (qv != nullptr) {
        const double jump = (qv->f(x[i]) - qv->f(x[j])) / Nd;
        qv->jump_qv += jump * jump;
        ++qv->events;
      }
      x[j] = x[i];
    }
    visit(step + 1, x, mass);
  }
}

MeasurePath simulate_fv_moran(const AtomMeasure& mu0, double epsilon, const NoiseStream& stream,
                              const Grid& grid, const ParticleOptions& opts, MoranQv* qv) {
  return record(grid, true, [&](const ParticleVisitor& v) {
    simulate_moran_visit(mu0, epsilon, stream, grid, opts, v, qv);
  });
}

std::vector<double> empirical_cdf(const AtomMeasure& mu, const Grid& grid, CdfAnchor anchor) {
  std::vector<std::size_t> order(mu.positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mu.positions[a] < mu.positions[b]; });
  std::vector<double> u(grid.ny, 0.0);
  double below_zero = 0.0;  // mass at x <= 0
  if (anchor == CdfAnchor::zero) {
    for (std::size_t k = 0; k < mu.positions.size(); ++k) {
      if (mu.positions[k] <= 0.0) below_zero += mu.masses[k];
    }
  }
  std::size_t next = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.ny; ++i) {
    const double y = grid.y(i);
    while (next < order.size() && mu.positions[order[next]] <= y) acc += mu.masses[order[next++]];
    u[i] = anchor == CdfAnchor::zero ? acc - below_zero : acc;
  }
  return u;
}

PathField empirical_cdf_field(const MeasurePath& path, CdfAnchor anchor) {
  if (path.representation != MeasurePath::Representation::atoms) {
    throw ValidationError("empirical_cdf_field: path must store atoms");
  }
  PathField out{path.grid, {}};
  for (std::size_t s = 0; s < path.steps(); ++s) {
    out.slices.push_back(Field{empirical_cdf(path.atoms[s], path.grid, anchor), path.times[s]});
  }
  return out;
}

}  // namespace ldp
