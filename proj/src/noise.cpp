#include "ldp/noise.hpp"

#include <cmath>
#include <numbers>

#include "ldp/error.hpp"

namespace ldp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t root_seed, std::uint64_t index) {
  return splitmix64(root_seed ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

namespace {

inline void box_muller(double u1, double u2, double& z0, double& z1) {
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(phi);
  z1 = r * std::sin(phi);
}

}  // namespace

double NoiseStream::normal(std::size_t step, std::size_t cell) const {
  const std::uint64_t base = (static_cast<std::uint64_t>(step) << 32) | (cell & ~std::size_t{1});
  double z0, z1;
  box_muller(to_open_unit(counter_hash(key_, base)), to_open_unit(counter_hash(key_, base + 1)),
             z0, z1);
  return (cell & 1) ? z1 : z0;
}

void NoiseStream::normal_pair(std::size_t step, std::size_t pair, double& z0, double& z1) const {
  const std::uint64_t base = (static_cast<std::uint64_t>(step) << 32) | (2 * pair);
  box_muller(to_open_unit(counter_hash(key_, base)), to_open_unit(counter_hash(key_, base + 1)),
             z0, z1);
}

void sample_step_noise(const NoiseStream& stream, std::size_t step, std::span<double> out) {
  const std::uint64_t key = stream.key();
  const std::uint64_t hi = static_cast<std::uint64_t>(step) << 32;
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; k += 2) {
    double z0, z1;
    box_muller(to_open_unit(counter_hash(key, hi | k)), to_open_unit(counter_hash(key, hi | (k + 1))),
               z0, z1);
    out[k] = z0;
    if (k + 1 < n) out[k + 1] = z1;
  }
}

std::vector<double> sample_step_noise(const NoiseStream& stream, std::size_t step, std::size_t na) {
  std::vector<double> xi(na);
  sample_step_noise(stream, step, xi);
  return xi;
}

std::vector<double> brownian_basis(const NoiseStream& stream, std::size_t j, std::size_t nt,
                                   double dt) {
  if (!(dt > 0.0)) throw DomainError("brownian_basis: dt must be positive");
  std::vector<double> b(nt + 1, 0.0);
  const double s = std::sqrt(dt);
  for (std::size_t n = 0; n < nt; ++n) b[n + 1] = b[n] + s * stream.normal(n, j);
  return b;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double z0, z1;
  const double u1 = uniform();
  const double u2 = uniform();
  box_muller(u1, u2, z0, z1);
  spare_ = z1;
  has_spare_ = true;
  return z0;
}

std::uint64_t CounterRng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("poisson: invalid mean");
  if (mean == 0.0) return 0;
  const double u = uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  // Inversion; the cap guards against underflowed exp(-mean).
  while (u > cdf && k < 100000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && static_cast<double>(k) > mean) break;
  }
  return k;
}

std::size_t CounterRng::below(std::size_t n) {
  if (n == 0) throw DomainError("below: empty range");
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace ldp
