#include "ldp/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ldp/error.hpp"
#include "ldp/simd.hpp"
#include "simd/lookup_formula.hpp"

namespace ldp {

ModelKind parse_model_kind(const std::string& name) {
  if (name == "sbm") return ModelKind::sbm;
  if (name == "fvp") return ModelKind::fvp;
  if (name == "custom") return ModelKind::custom;
  throw ValidationError("unknown model kind '" + name + "' (expected sbm, fvp or custom)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sbm: return "sbm";
    case ModelKind::fvp: return "fvp";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(context + ": cannot parse number '" + text + "'");
  }
  if (used != text.size()) throw ValidationError(context + ": trailing characters in '" + text + "'");
  return v;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void load_table(const std::string& path, std::vector<double>& ys, std::vector<double>& fs) {
  std::ifstream in(path);
  if (!in) throw ValidationError("tabulated initial datum: cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("tabulated: expected 'y,F' rows in " + path);
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    char* end = nullptr;
    const double y = std::strtod(a.c_str(), &end);
    if (end == a.c_str()) {
      if (ys.empty()) continue;  // header row
      throw ValidationError("tabulated: bad row '" + line + "'");
    }
    ys.push_back(y);
    fs.push_back(parse_number(b, "tabulated"));
  }
  if (ys.size() < 2) throw ValidationError("tabulated: need at least two rows in " + path);
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (!(ys[i] > ys[i - 1])) throw ValidationError("tabulated: y column must increase strictly");
  }
}

std::size_t expected_params(const std::string& family, std::size_t given, bool& ok) {
  struct Arity {
    const char* name;
    std::size_t lo, hi;
  };
  static const Arity table[] = {
      {"uniform-cdf", 2, 3}, {"dirac", 1, 2},   {"gaussian-cdf", 2, 3}, {"gaussian-density", 2, 2},
      {"lebesgue", 2, 2},    {"constant", 1, 1},
  };
  for (const auto& a : table) {
    if (family == a.name) {
      ok = given >= a.lo && given <= a.hi;
      return a.lo;
    }
  }
  throw ValidationError("unknown initial-datum family '" + family + "'");
}

}  // namespace

double InitialDatum::operator()(double y) const {
  const auto param = [&](std::size_t i, double dflt) { return i < params.size() ? params[i] : dflt; };
  if (family == "uniform-cdf") {
    const double a = params[0], b = params[1];
    return std::clamp((y - a) / (b - a), 0.0, 1.0) * param(2, 1.0);
  }
  if (family == "dirac") return y >= params[0] ? param(1, 1.0) : 0.0;
  if (family == "gaussian-cdf") return normal_cdf((y - params[0]) / params[1]) * param(2, 1.0);
  if (family == "gaussian-density") {
    const double z = (y - params[0]) / params[1];
    return std::exp(-0.5 * z * z) / (params[1] * std::sqrt(2.0 * std::numbers::pi));
  }
  if (family == "lebesgue") return std::clamp(y, params[0], params[1]);
  if (family == "constant") return params[0];
  if (family == "tabulated") {
    if (y <= table_y.front()) return table_values.front();
    if (y >= table_y.back()) return table_values.back();
    const auto it = std::upper_bound(table_y.begin(), table_y.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - table_y.begin());
    const double w = (y - table_y[k - 1]) / (table_y[k] - table_y[k - 1]);
    return (1.0 - w) * table_values[k - 1] + w * table_values[k];
  }
  throw ValidationError("unknown initial-datum family '" + family + "'");
}

std::string InitialDatum::describe() const {
  std::ostringstream os;
  os << family << '(';
  if (family == "tabulated") {
    os << table_y.size() << " rows";
  } else {
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
  }
  os << ')';
  return os.str();
}

InitialDatum parse_initial_datum(const std::string& text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ValidationError("initial datum '" + text + "': expected family(params)");
  }
  InitialDatum d;
  d.family = trim(s.substr(0, open));
  d.params.clear();
  const std::string inner = s.substr(open + 1, s.size() - open - 2);
  if (d.family == "tabulated") {
    load_table(trim(inner), d.table_y, d.table_values);
    return d;
  }
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) d.params.push_back(parse_number(trim(item), d.family));
  bool ok = false;
  expected_params(d.family, d.params.size(), ok);
  if (!ok) throw ValidationError("initial datum '" + text + "': wrong number of parameters");
  if ((d.family == "uniform-cdf" || d.family == "lebesgue") && !(d.params[0] < d.params[1])) {
    throw ValidationError("initial datum '" + text + "': need a < b");
  }
  if ((d.family == "gaussian-cdf" || d.family == "gaussian-density") && !(d.params[1] > 0.0)) {
    throw ValidationError("initial datum '" + text + "': need s > 0");
  }
  return d;
}

void ModelSpec::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("model: epsilon must be >= 0");
  if (!(a_min < a_max)) throw ValidationError("model: a_min must be below a_max");
  if (kind == ModelKind::fvp && (a_min != 0.0 || a_max != 1.0)) {
    throw ValidationError("model: fvp noise space must be exactly [0, 1]");
  }
  if (kind == ModelKind::sbm && !(a_min <= 0.0 && 0.0 <= a_max)) {
    throw ValidationError("model: sbm noise window must contain 0");
  }
  if (kind == ModelKind::custom && !custom_g) throw ValidationError("model: custom kind needs G");
  if (kind != ModelKind::custom &&
      (initial.family == "gaussian-density" || initial.family == "constant")) {
    throw ValidationError("model: " + initial.family + " is only valid for the custom kind");
  }
}

CoefficientFn named_coefficient(const std::string& name) {
  if (name == "zero") return [](double, double, double) { return 0.0; };
  if (name == "additive") return [](double, double, double) { return 1.0; };
  throw ValidationError("unknown custom coefficient '" + name + "' (expected zero or additive)");
}

void check_compatible(const ModelSpec& model, const Grid& grid) {
  model.validate();
  grid.validate();
  if (model.a_min != grid.a_min || model.a_max != grid.a_max) {
    throw ValidationError("model noise interval does not match the grid");
  }
}

double g_eval(const ModelSpec& model, double a, double y, double u) {
  switch (model.kind) {
    case ModelKind::sbm:
      if (0.0 < a && a < u) return 1.0;
      if (u < a && a < 0.0) return -1.0;
      return 0.0;
    case ModelKind::fvp:
      if (a < 0.0 || a > 1.0) throw DomainError("g_eval: fvp requires a in [0, 1]");
      return (a < u ? 1.0 : 0.0) - u;
    case ModelKind::custom: {
      const double g = model.custom_g(a, y, u);
      if (!std::isfinite(g)) {
        throw NumericalError("custom G is not finite at a=" + std::to_string(a) +
                             ", y=" + std::to_string(y) + ", u=" + std::to_string(u));
      }
      return g;
    }
  }
  return 0.0;
}

double g_cross_quadrature(const ModelSpec& model, std::size_t na, double u1, double u2) {
  if (na == 0) throw ValidationError("g_cross_quadrature: na must be positive");
  const double da = (model.a_max - model.a_min) / static_cast<double>(na);
  double s = 0.0;
  for (std::size_t k = 0; k < na; ++k) {
    const double a = model.a_min + (static_cast<double>(k) + 0.5) * da;
    s += g_eval(model, a, 0.0, u1) * g_eval(model, a, 0.0, u2);
  }
  return s * da;
}

double g_cross(const ModelSpec& model, double u1, double u2) {
  switch (model.kind) {
    case ModelKind::fvp: return std::min(u1, u2) - u1 * u2;
    case ModelKind::sbm:
      if (u1 > 0.0 && u2 > 0.0) return std::min(u1, u2);
      if (u1 < 0.0 && u2 < 0.0) return std::min(-u1, -u2);
      return 0.0;
    case ModelKind::custom: return g_cross_quadrature(model, 4096, u1, u2);
  }
  return 0.0;
}

double g_diff_integral(const ModelSpec& model, double u1, double u2) {
  const double d = std::abs(u1 - u2);
  switch (model.kind) {
    case ModelKind::sbm: return d;
    case ModelKind::fvp: return d * (1.0 - d);
    case ModelKind::custom: {
      const std::size_t na = 4096;
      const double da = (model.a_max - model.a_min) / static_cast<double>(na);
      double s = 0.0;
      for (std::size_t k = 0; k < na; ++k) {
        const double a = model.a_min + (static_cast<double>(k) + 0.5) * da;
        const double g = g_eval(model, a, 0.0, u1) - g_eval(model, a, 0.0, u2);
        s += g * g;
      }
      return s * da;
    }
  }
  return 0.0;
}

ConditionReport verify_coefficient_conditions(const ModelSpec& model,
                                              std::span<const ProbePoint> probe, double K) {
  if (probe.empty()) throw ValidationError("verify_coefficient_conditions: empty probe set");
  ConditionReport r;
  for (const auto& p : probe) {
    for (double u : {p.u1, p.u2}) {
      const double ratio = g_cross(model, u, u) / (1.0 + u * u);
      if (ratio > r.k_growth) r.k_growth = ratio;
      if (ratio > K * (1.0 + 1e-12) && r.holds_growth) {
        r.holds_growth = false;
        r.growth_witness = p;
      }
    }
    const double diff = g_diff_integral(model, p.u1, p.u2);
    const double gap = std::abs(p.u1 - p.u2);
    double ratio = 0.0;
    if (gap > 0.0) {
      ratio = diff / gap;
    } else if (diff > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    if (ratio > r.k_lipschitz) r.k_lipschitz = ratio;
    if (ratio > K * (1.0 + 1e-12) && r.holds_half_lipschitz) {
      r.holds_half_lipschitz = false;
      r.lipschitz_witness = p;
    }
    ++r.samples;
  }
  return r;
}

Field initial_field(const ModelSpec& model, const Grid& grid) {
  model.validate();
  grid.validate();
  Field f{std::vector<double>(grid.ny), 0.0};
  const double anchor = model.kind == ModelKind::sbm ? model.initial(0.0) : 0.0;
  for (std::size_t i = 0; i < grid.ny; ++i) f.values[i] = model.initial(grid.y(i)) - anchor;
  check_field(grid, f.values, "initial_field");
  if (model.kind == ModelKind::custom) return f;

  double scale = 1.0;
  for (double v : f.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < grid.ny; ++i) {
    if (f.values[i] < f.values[i - 1] - 1e-12 * scale) {
      throw ValidationError("initial_field: F decreases at y = " + std::to_string(grid.y(i)));
    }
  }
  if (model.kind == ModelKind::fvp) {
    if (std::abs(f.values.front()) > 1e-6 || std::abs(f.values.back() - 1.0) > 1e-6) {
      throw ValidationError("initial_field: fvp datum must satisfy F(-L) = 0 and F(L) = 1");
    }
    f.values.front() = 0.0;
    f.values.back() = 1.0;
  }
  return f;
}

std::pair<double, double> suggest_noise_window(const ModelSpec& model, const Grid& grid) {
  if (model.kind == ModelKind::fvp) return {0.0, 1.0};
  ModelSpec probe = model;
  probe.a_min = -1.0;
  probe.a_max = 1.0;
  const Field f = initial_field(probe, grid);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double big = std::max(std::abs(*lo), std::abs(*hi));
  const double pad = std::max(1.0, 6.0 * std::sqrt(model.epsilon * grid.T * big));
  return {std::min(0.0, *lo) - pad, std::max(0.0, *hi) + pad};
}

IndicatorIntegral::IndicatorIntegral(const ModelSpec& model, const Grid& grid)
    : kind_(model.kind), g_(model.custom_g), grid_(grid) {
  check_compatible(model, grid);
  vals_.assign(grid.na, 0.0);
  prefix_.assign(grid.na + 1, 0.0);
  y_ = grid.coordinates();
  scratch_.assign(grid.ny, 0.0);
}

void IndicatorIntegral::set_cells(std::span<const double> v) {
  if (v.size() != grid_.na) throw ValidationError("IndicatorIntegral: expected na cell values");
  const double da = grid_.da();
  std::copy(v.begin(), v.end(), vals_.begin());
  prefix_[0] = 0.0;
  for (std::size_t k = 0; k < grid_.na; ++k) prefix_[k + 1] = prefix_[k] + vals_[k] * da;
}

double IndicatorIntegral::cumulative(double u) const {
  return simd::detail::cumulative_at(u, prefix_.data(), vals_.data(), grid_.na, grid_.a_min,
                                     1.0 / grid_.da(), grid_.da());
}

void IndicatorIntegral::evaluate(std::span<const double> u, std::span<double> out) const {
  if (u.size() != grid_.ny || out.size() != grid_.ny) {
    throw ValidationError("IndicatorIntegral: field size does not match the grid");
  }
  const std::size_t n = u.size();
  if (kind_ == ModelKind::custom) {
    const double da = grid_.da();
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < grid_.na; ++k) {
        const double g = g_(grid_.a_mid(k), y_[i], u[i]);
        if (!std::isfinite(g)) {
          throw NumericalError("custom G is not finite at y=" + std::to_string(y_[i]) +
                               ", u=" + std::to_string(u[i]));
        }
        s += g * vals_[k];
      }
      out[i] = s * da;
    }
    return;
  }
  simd::cumulative_lookup(u, out, prefix_, vals_, grid_.a_min, grid_.da());
  if (kind_ == ModelKind::sbm) {
    const double c0 = cumulative(0.0);
    for (std::size_t i = 0; i < n; ++i) out[i] -= c0;
  } else {
    const double c1 = prefix_.back();
    for (std::size_t i = 0; i < n; ++i) out[i] -= u[i] * c1;
  }
}

void IndicatorIntegral::derivative_u(std::span<const double> u, std::span<double> out) const {
  if (kind_ == ModelKind::custom) {
    throw ValidationError("IndicatorIntegral: du-derivative is not available for custom G");
  }
  const double inv_da = 1.0 / grid_.da();
  const double top = static_cast<double>(grid_.na);
  const double c1 = kind_ == ModelKind::fvp ? prefix_.back() : 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = (u[i] - grid_.a_min) * inv_da;
    double d = 0.0;
    if (x > 0.0 && x < top) d = vals_[std::min(static_cast<std::size_t>(x), grid_.na - 1)];
    out[i] = d - c1;
  }
}

void IndicatorIntegral::accumulate_transpose(std::span<const double> u, std::span<const double> mu,
                                             std::span<double> grad) const {
  const std::size_t na = grid_.na;
  const double da = grid_.da();
  if (grad.size() != na) throw ValidationError("accumulate_transpose: expected na gradient cells");
  if (kind_ == ModelKind::custom) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t k = 0; k < na; ++k) grad[k] += mu[i] * g_(grid_.a_mid(k), y_[i], u[i]) * da;
    }
    return;
  }
  // C(u) = da * sum_{k<j} v_k + frac da v_j, so dC/dv_k = da [k < j] + frac da [k = j].
  std::vector<double> whole(na + 1, 0.0), part(na, 0.0);
  const double inv_da = 1.0 / da;
  const double top = static_cast<double>(na);
  const auto bucket = [&](double value, double weight) {
    double x = (value - grid_.a_min) * inv_da;
    if (x <= 0.0) return;
    if (x >= top) {
      whole[na] += weight;
      return;
    }
    const std::size_t j = std::min(static_cast<std::size_t>(x), na - 1);
    whole[j] += weight;
    part[j] += (x - static_cast<double>(j)) * weight;
  };
  double mu_sum = 0.0, mu_u = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    bucket(u[i], mu[i]);
    mu_sum += mu[i];
    mu_u += mu[i] * u[i];
  }
  if (kind_ == ModelKind::sbm) bucket(0.0, -mu_sum);
  double above = whole[na];
  for (std::size_t k = na; k-- > 0;) {
    grad[k] += da * (above + part[k]);
    above += whole[k];
  }
  if (kind_ == ModelKind::fvp) {
    for (std::size_t k = 0; k < na; ++k) grad[k] -= da * mu_u;
  }
}

std::vector<double> stochastic_increment(const ModelSpec& model, const Grid& grid,
                                         std::span<const double> u, std::span<const double> xi) {
  if (xi.size() != grid.na) throw ValidationError("stochastic_increment: xi must have na entries");
  check_field(grid, u, "stochastic_increment");
  IndicatorIntegral integral(model, grid);
  std::vector<double> v(xi.begin(), xi.end());
  const double scale = std::sqrt(grid.dt() / grid.da());
  for (double& x : v) x *= scale;
  integral.set_cells(v);
  std::vector<double> out(grid.ny);
  integral.evaluate(u, out);
  return out;
}

}  // namespace ldp
