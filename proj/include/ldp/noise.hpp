#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ldp {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-realization key: splitmix64(root ^ splitmix64(index + 0x9E3779B97F4A7C15)).
std::uint64_t mix_seed(std::uint64_t root_seed, std::uint64_t index);

/// Counter-based hash of (key, counter).
inline std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(key ^ splitmix64(counter));
}

/// Uniform in the open interval (0, 1) from the top 53 bits.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Immutable descriptor of one realization's space-time white noise.
///
/// The standard normal for (step, cell) is a pure function of the key and is
/// generated by Box-Muller from the pair of uniforms at counters
/// (step << 32) | (cell & ~1) and the next one.
struct NoiseStream {
  std::uint64_t root_seed = 0;
  std::uint64_t realization_index = 0;

  NoiseStream() = default;
  NoiseStream(std::uint64_t root, std::uint64_t index)
      : root_seed(root), realization_index(index), key_(mix_seed(root, index)) {}

  std::uint64_t key() const { return key_; }

  /// Standard normal attached to noise cell `cell` during time step `step`.
  double normal(std::size_t step, std::size_t cell) const;

  /// Both normals of the pair (2 pair, 2 pair + 1) in one Box-Muller evaluation.
  void normal_pair(std::size_t step, std::size_t pair, double& z0, double& z1) const;

 private:
  std::uint64_t key_ = mix_seed(0, 0);
};

/// xi_k ~ W([t, t + dt) x cell_k) / sqrt(dt da), k = 0..out.size()-1.
void sample_step_noise(const NoiseStream& stream, std::size_t step, std::span<double> out);
std::vector<double> sample_step_noise(const NoiseStream& stream, std::size_t step, std::size_t na);

/// B^j at times 0, dt, ..., nt dt for the normalized-indicator basis 1_{cell_j} / sqrt(da).
std::vector<double> brownian_basis(const NoiseStream& stream, std::size_t j, std::size_t nt,
                                   double dt);

/// Sequential generator over the same counter hash, for particle systems.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t root_seed, std::uint64_t index) : key_(mix_seed(root_seed, index)) {}

  std::uint64_t next_u64() { return counter_hash(key_, counter_++); }
  double uniform() { return to_open_unit(next_u64()); }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  /// Poisson variate by sequential inversion; mean should stay moderate (< ~500).
  std::uint64_t poisson(double mean);
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ldp
