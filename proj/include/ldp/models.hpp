#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldp/grid.hpp"

namespace ldp {

enum class ModelKind { sbm, fvp, custom };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// G(a, y, u) for the custom kind.
using CoefficientFn = std::function<double(double a, double y, double u)>;

/// Named analytic initial datum or tabulated samples.
///
/// Families (parameters in parentheses, optional ones in brackets):
///   uniform-cdf(a, b [, mass])     clamp((y - a) / (b - a), 0, 1) * mass
///   dirac(x0 [, mass])             mass * 1{y >= x0}
///   gaussian-cdf(m, s [, mass])    mass * Phi((y - m) / s)
///   gaussian-density(m, s)         N(m, s^2) density (custom kind only)
///   lebesgue(a, b)                 clamp(y, a, b)
///   constant(c)                    c (custom kind only)
///   tabulated(path)                linear interpolation of a CSV of (y, F) rows
struct InitialDatum {
  std::string family = "uniform-cdf";
  std::vector<double> params{0.0, 1.0};
  std::vector<double> table_y, table_values;

  /// Unanchored value at y.
  double operator()(double y) const;
  std::string describe() const;
};

/// Parses "family(p1, p2, ...)"; tabulated data are loaded from the given CSV path.
InitialDatum parse_initial_datum(const std::string& text);

struct ModelSpec {
  ModelKind kind = ModelKind::fvp;
  InitialDatum initial;
  double epsilon = 0.01;
  double a_min = 0.0;
  double a_max = 1.0;
  CoefficientFn custom_g;   // custom kind only
  std::string custom_name;  // label for output

  void validate() const;
};

/// Named custom coefficients: "zero" (G = 0) and "additive" (G = 1, noise independent of u).
CoefficientFn named_coefficient(const std::string& name);

/// Throws ValidationError unless the model's noise interval equals the grid's and satisfies
/// the kind's requirement (fvp: exactly [0, 1]; sbm: contains 0).
void check_compatible(const ModelSpec& model, const Grid& grid);

/// sbm: 1{0<a<u} - 1{u<a<0}; fvp: 1{a<u} - u; custom: the user function.
double g_eval(const ModelSpec& model, double a, double y, double u);

/// Closed form of the integral of G(a, ., u1) G(a, ., u2) over the noise interval.
/// The custom kind uses a 4096-cell midpoint rule.
double g_cross(const ModelSpec& model, double u1, double u2);

/// Midpoint rule over na cells of G(a_k, ., u1) G(a_k, ., u2) da.
double g_cross_quadrature(const ModelSpec& model, std::size_t na, double u1, double u2);

/// Integral of |G(a, ., u1) - G(a, ., u2)|^2 (closed form for sbm and fvp).
double g_diff_integral(const ModelSpec& model, double u1, double u2);

struct ProbePoint {
  double u1 = 0.0;
  double u2 = 0.0;
  double y = 0.0;
};

/// Structural conditions on G:
///   half-Lipschitz: int |G(u1) - G(u2)|^2 <= K |u1 - u2|
///   growth:         int |G(u)|^2 <= K (1 + u^2)
struct ConditionReport {
  bool holds_growth = true;
  bool holds_half_lipschitz = true;
  double k_growth = 0.0;     // smallest admissible K over the probe set
  double k_lipschitz = 0.0;  // smallest admissible K over the probe set
  std::optional<ProbePoint> growth_witness;
  std::optional<ProbePoint> lipschitz_witness;
  std::size_t samples = 0;
};

ConditionReport verify_coefficient_conditions(const ModelSpec& model,
                                              std::span<const ProbePoint> probe, double K = 1.0);

/// Samples F on the grid. sbm data are anchored so that F(0) = 0; fvp data must run from 0 to 1
/// within 1e-6 and are then pinned exactly. sbm and fvp data must be nondecreasing.
Field initial_field(const ModelSpec& model, const Grid& grid);

/// Noise window for sbm covering [min(0, min F) - pad, max(0, max F) + pad],
/// pad = max(1, 6 sqrt(eps T max|F|)). fvp returns [0, 1].
std::pair<double, double> suggest_noise_window(const ModelSpec& model, const Grid& grid);

/// D(u)(y) = int G(a, y, u(y)) v(a) da for a piecewise-constant v on the noise cells.
///
/// For sbm and fvp the integral is exact: with C the cumulative of v from a_min,
/// sbm gives C(u) - C(0) and fvp gives C(u) - u C(1). The custom kind uses the midpoint rule.
class IndicatorIntegral {
 public:
  IndicatorIntegral(const ModelSpec& model, const Grid& grid);

  void set_cells(std::span<const double> v);
  std::span<const double> cells() const { return vals_; }

  /// out[i] = D(u)(y_i).
  void evaluate(std::span<const double> u, std::span<double> out) const;

  /// out[i] = dD/du at (y_i, u_i). Not available for the custom kind.
  void derivative_u(std::span<const double> u, std::span<double> out) const;

  /// grad[k] += sum_i mu_i dD_i/dv_k.
  void accumulate_transpose(std::span<const double> u, std::span<const double> mu,
                            std::span<double> grad) const;

 private:
  double cumulative(double u) const;

  ModelKind kind_;
  CoefficientFn g_;
  Grid grid_;
  std::vector<double> vals_, prefix_, y_;
  mutable std::vector<double> scratch_;
};

/// sqrt(dt da) sum_k G(a_k, y, u(y)) xi_k, with G replaced by its cell average for sbm/fvp.
std::vector<double> stochastic_increment(const ModelSpec& model, const Grid& grid,
                                         std::span<const double> u, std::span<const double> xi);

}  // namespace ldp
