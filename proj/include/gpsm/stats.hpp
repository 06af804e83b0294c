#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace gpsm {

/// Kolmogorov distance between the empirical CDF of `samples` and the
/// standard normal CDF (exact sup over the step function).
double kolmogorov_distance(std::vector<double> samples);

/// 1-Wasserstein distance to the standard normal via the quantile coupling
/// with plotting positions (i - 1/2) / m.
double wasserstein1_distance(std::vector<double> samples);

/// Unbiased sample cumulants (Fisher k-statistics) plus scale-free skewness
/// and excess kurtosis with leave-one-out jackknife standard errors.
struct Cumulants {
  double mean = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double skewness = 0.0;        // k3 / k2^{3/2}
  double excess_kurtosis = 0.0; // k4 / k2^2
  double skewness_se = 0.0;
  double excess_kurtosis_se = 0.0;
};
Cumulants empirical_cumulants(const std::vector<double>& samples);

/// OLS slope of log(value) on log(scale) with a 95% confidence interval from
/// the residual variance (Student t for small samples).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t points = 0;
};
RateFit loglog_rate_fit(const std::vector<std::pair<double, double>>& scale_value);

}  // namespace gpsm
