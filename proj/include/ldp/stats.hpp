#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace ldp::stats {

/// Pairwise (cascade) summation; stable to O(log n) rounding.
double pairwise_sum(std::span<const double> x);

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator); 0 for n < 2.
double variance(std::span<const double> x);
/// Standard error of the mean.
double std_error(std::span<const double> x);
/// Standard error of the sample variance, sqrt((m4 - s^4) / n) with central moments.
double variance_std_error(std::span<const double> x);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = a + b x. Throws ValidationError when x has no spread.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Wilson score interval for k successes out of n at normal quantile z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

/// Two-sided Student t quantile for a 95% interval with `dof` degrees of freedom.
double t95(std::size_t dof);

}  // namespace ldp::stats
