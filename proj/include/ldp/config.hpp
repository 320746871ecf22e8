#pragma once

// Run configuration: a flat map of dotted keys (model.*, grid.*, noise.*, experiment.*).
// Every key has a typed default; a JSON file (nested objects or dotted keys) and then
// command-line overrides are merged on top, each checked against the default's type.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldp/grid.hpp"
#include "ldp/metrics.hpp"
#include "ldp/models.hpp"
#include "ldp/solver.hpp"

namespace ldp {

class Config {
 public:
  /// All known keys with their default values, in schema order.
  static Config defaults();

  /// Merges a JSON object; nested objects are flattened to dotted keys.
  void merge(const nlohmann::json& object);
  void merge_file(const std::filesystem::path& path);

  /// Sets one key from its textual form, parsed according to the key's type.
  /// Lists are comma separated.
  void set(const std::string& key, const std::string& text);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::vector<std::string> keys() const;

  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;

  /// Human-readable type of a key, for help output.
  std::string type_name(const std::string& key) const;

  const nlohmann::ordered_json& values() const { return values_; }
  /// Canonical serialization; its blob hash identifies the run configuration.
  std::string dump() const { return values_.dump(2); }

 private:
  const nlohmann::ordered_json& at(const std::string& key) const;
  nlohmann::ordered_json values_;
};

/// The typed objects a config describes, with "auto" entries resolved.
struct Setup {
  ModelSpec model;
  Grid grid;
  MetricParams metric;
  NoiseRefinement refinement = NoiseRefinement::bridge;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

/// grid.bc "auto" picks neumann for sbm and dirichlet for fvp. noise.window "auto" is
/// [0, 1] for fvp and, for sbm, suggest_noise_window at the largest epsilon the run uses
/// (model.epsilon and experiment.epsilons).
Setup resolve(const Config& cfg);

}  // namespace ldp
