#include "ldp/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ldp/error.hpp"
#include "ldp/io.hpp"

namespace ldp {

namespace {

using ojson = nlohmann::ordered_json;

void flatten(const nlohmann::json& node, const std::string& prefix,
             std::vector<std::pair<std::string, nlohmann::json>>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out.emplace_back(prefix, node);
}

bool is_count(const ojson& v) { return v.is_number_unsigned() || v.is_number_integer(); }

// A value is accepted when it has the same JSON kind as the default; integers may stand in
// for floating defaults.
void check_type(const std::string& key, const ojson& def, const nlohmann::json& v) {
  bool ok = false;
  if (def.is_boolean()) {
    ok = v.is_boolean();
  } else if (def.is_number_float()) {
    ok = v.is_number();
  } else if (is_count(def)) {
    ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  } else if (def.is_string()) {
    ok = v.is_string();
  } else if (def.is_array()) {
    ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const auto& x) { return x.is_number(); });
  }
  if (!ok) throw ValidationError("config: key '" + key + "' has the wrong type: " + v.dump());
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("config: key '" + key + "' expects a number, got '" + s + "'");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("config: key '" + key + "' expects a nonnegative integer, got '" + s +
                          "'");
  }
  return v;
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw ValidationError("config: noise.window expects 'auto' or 'a_min,a_max', got '" + s + "'");
  }
  return {parse_double("noise.window", s.substr(0, comma)),
          parse_double("noise.window", s.substr(comma + 1))};
}

}  // namespace

Config Config::defaults() {
  Config c;
  ojson& v = c.values_;
  v["model.kind"] = "fvp";
  v["model.initial"] = "uniform-cdf(0,1)";
  v["model.epsilon"] = 0.01;
  v["model.coefficient"] = "zero";
  v["grid.L"] = 8.0;
  v["grid.dx"] = 0.05;
  v["grid.T"] = 1.0;
  v["grid.nt"] = 1000u;
  v["grid.na"] = 64u;
  v["grid.bc"] = "auto";
  v["noise.window"] = "auto";
  v["noise.seed"] = 1u;
  v["noise.realization"] = 0u;
  v["noise.refinement"] = "bridge";
  v["experiment.output"] = "out";
  v["experiment.threads"] = 0u;
  v["experiment.realizations"] = 200u;
  v["experiment.epsilons"] = ojson::array({1e-1, 3e-2, 1e-2, 3e-3});
  v["experiment.deltas"] = ojson::array({0.1});
  v["experiment.deviation"] = "weighted-sup";
  v["experiment.metric_stride"] = 0u;
  v["experiment.bracket"] = false;
  v["experiment.delta"] = 0.1;
  v["experiment.max_iter"] = 400u;
  v["experiment.energy_budget"] = 0.0;
  v["experiment.control"] = "";
  v["experiment.snapshots"] = false;
  v["experiment.times"] = ojson::array({0.25, 0.5, 1.0});
  v["experiment.particle_refinement"] = 100u;
  v["experiment.particle_nt"] = 0u;
  v["experiment.rate_multiplier"] = 1.0;
  v["experiment.stratified"] = true;
  v["experiment.moment"] = 4u;
  v["experiment.lag_min"] = 0.05;
  v["experiment.lag_max"] = 0.8;
  v["experiment.lag_levels"] = 10u;
  v["experiment.directions"] = 8u;
  v["experiment.lattice"] = 12u;
  v["experiment.y_low"] = -1.0;
  v["experiment.y_high"] = 2.0;
  v["experiment.alpha"] = 0.25;
  v["experiment.beta"] = 1.0;
  v["experiment.beta0"] = 0.25;
  v["experiment.beta1"] = 0.5;
  v["experiment.m_max"] = 16u;
  return c;
}

const ojson& Config::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config: unknown key '" + key + "'");
  return *it;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (auto it = values_.begin(); it != values_.end(); ++it) out.push_back(it.key());
  return out;
}

void Config::merge(const nlohmann::json& object) {
  if (!object.is_object()) throw ValidationError("config: top level must be a JSON object");
  std::vector<std::pair<std::string, nlohmann::json>> flat;
  flatten(object, "", flat);
  for (const auto& [key, value] : flat) {
    const ojson& def = at(key);
    check_type(key, def, value);
    values_[key] = value;
  }
}

void Config::merge_file(const std::filesystem::path& path) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config: " + path.string() + ": " + e.what());
  }
  merge(parsed);
}

void Config::set(const std::string& key, const std::string& s) {
  const ojson& def = at(key);
  if (def.is_boolean()) {
    if (s == "true" || s == "1") {
      values_[key] = true;
    } else if (s == "false" || s == "0") {
      values_[key] = false;
    } else {
      throw ValidationError("config: key '" + key + "' expects true or false, got '" + s + "'");
    }
  } else if (def.is_number_float()) {
    values_[key] = parse_double(key, s);
  } else if (is_count(def)) {
    values_[key] = parse_unsigned(key, s);
  } else if (def.is_string()) {
    values_[key] = s;
  } else {
    ojson arr = ojson::array();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(parse_double(key, item));
    values_[key] = arr;
  }
}

double Config::number(const std::string& key) const {
  const ojson& v = at(key);
  if (!v.is_number()) throw ValidationError("config: key '" + key + "' is not a number");
  return v.get<double>();
}

std::size_t Config::count(const std::string& key) const {
  const ojson& v = at(key);
  if (!is_count(v)) throw ValidationError("config: key '" + key + "' is not a count");
  return v.get<std::size_t>();
}

std::uint64_t Config::seed(const std::string& key) const {
  const ojson& v = at(key);
  if (!is_count(v)) throw ValidationError("config: key '" + key + "' is not a seed");
  return v.get<std::uint64_t>();
}

bool Config::flag(const std::string& key) const {
  const ojson& v = at(key);
  if (!v.is_boolean()) throw ValidationError("config: key '" + key + "' is not a boolean");
  return v.get<bool>();
}

std::string Config::text(const std::string& key) const {
  const ojson& v = at(key);
  if (!v.is_string()) throw ValidationError("config: key '" + key + "' is not a string");
  return v.get<std::string>();
}

std::vector<double> Config::list(const std::string& key) const {
  const ojson& v = at(key);
  if (!v.is_array()) throw ValidationError("config: key '" + key + "' is not a list");
  return v.get<std::vector<double>>();
}

std::string Config::type_name(const std::string& key) const {
  const ojson& v = at(key);
  if (v.is_boolean()) return "BOOL";
  if (v.is_number_float()) return "FLOAT";
  if (is_count(v)) return "UINT";
  if (v.is_array()) return "LIST";
  return "TEXT";
}

Setup resolve(const Config& cfg) {
  Setup s;
  ModelSpec& m = s.model;
  m.kind = parse_model_kind(cfg.text("model.kind"));
  m.initial = parse_initial_datum(cfg.text("model.initial"));
  m.epsilon = cfg.number("model.epsilon");
  if (m.kind == ModelKind::custom) {
    m.custom_name = cfg.text("model.coefficient");
    m.custom_g = named_coefficient(m.custom_name);
  }

  Grid& g = s.grid;
  g.L = cfg.number("grid.L");
  g.ny = Grid::points_for_spacing(g.L, cfg.number("grid.dx"));
  g.T = cfg.number("grid.T");
  g.nt = cfg.count("grid.nt");
  g.na = cfg.count("grid.na");
  const std::string bc = cfg.text("grid.bc");
  if (bc == "auto") {
    g.bc = m.kind == ModelKind::fvp ? Boundary::dirichlet_pinned : Boundary::neumann;
  } else {
    g.bc = parse_boundary(bc);
  }

  const std::string window = cfg.text("noise.window");
  std::pair<double, double> w{0.0, 1.0};
  if (window != "auto") {
    w = parse_window(window);
  } else if (m.kind == ModelKind::sbm) {
    ModelSpec probe = m;
    for (double e : cfg.list("experiment.epsilons")) probe.epsilon = std::max(probe.epsilon, e);
    w = suggest_noise_window(probe, g);
  }
  g.a_min = m.a_min = w.first;
  g.a_max = m.a_max = w.second;

  s.metric.alpha = cfg.number("experiment.alpha");
  s.metric.beta = cfg.number("experiment.beta");
  s.metric.beta0 = cfg.number("experiment.beta0");
  s.metric.beta1 = cfg.number("experiment.beta1");
  s.metric.m_max = cfg.count("experiment.m_max");
  s.metric.validate();

  s.refinement = parse_noise_refinement(cfg.text("noise.refinement"));
  s.seed = cfg.seed("noise.seed");
  s.threads = cfg.count("experiment.threads");

  g.validate();
  m.validate();
  check_compatible(m, g);
  return s;
}

}  // namespace ldp
