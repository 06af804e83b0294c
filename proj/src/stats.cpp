#include "gpsm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpsm/errors.hpp"
#include "gpsm/mathutil.hpp"

namespace gpsm {

namespace {

void require_sample(const std::vector<double>& samples, std::size_t min_size, const char* who) {
  if (samples.size() < min_size)
    throw invalid_input_error(std::string(who) + ": needs at least " + std::to_string(min_size) +
                              " samples, got " + std::to_string(samples.size()));
  for (double x : samples)
    if (!std::isfinite(x)) throw invalid_input_error(std::string(who) + ": non-finite sample");
}

// Two-sided 95% Student t quantiles for 1..30 degrees of freedom; the normal
// quantile takes over beyond that.
constexpr double kT95[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                             2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                             2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                             2.060,  2.056, 2.052, 2.048, 2.045, 2.042};

double t95(std::size_t df) {
  if (df == 0) return std::numeric_limits<double>::infinity();
  if (df <= 30) return kT95[df - 1];
  return 1.959963984540054;
}

struct KStats {
  double k2, k3, k4, g3, g4;
};

// k-statistics from raw power sums over `m` points.  Degenerate (zero
// variance) input reports k2 = 0; callers decide whether that is an error.
KStats kstats_from_power_sums(double s1, double s2, double s3, double s4, double m) {
  const double mean = s1 / m;
  // Central moments via the binomial expansion of sum (x - mean)^r.
  const double m2 = s2 / m - mean * mean;
  const double m3 = s3 / m - 3.0 * mean * s2 / m + 2.0 * mean * mean * mean;
  const double m4 = s4 / m - 4.0 * mean * s3 / m + 6.0 * mean * mean * s2 / m -
                    3.0 * mean * mean * mean * mean;
  KStats k;
  k.k2 = m * m2 / (m - 1.0);
  k.k3 = m * m * m3 / ((m - 1.0) * (m - 2.0));
  k.k4 = m * m * ((m + 1.0) * m4 - 3.0 * (m - 1.0) * m2 * m2) /
         ((m - 1.0) * (m - 2.0) * (m - 3.0));
  if (k.k2 > 0.0) {
    k.g3 = k.k3 / std::pow(k.k2, 1.5);
    k.g4 = k.k4 / (k.k2 * k.k2);
  } else {
    k.g3 = 0.0;
    k.g4 = 0.0;
  }
  return k;
}

}  // namespace

double kolmogorov_distance(std::vector<double> samples) {
  require_sample(samples, 1, "kolmogorov_distance");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double cdf = normal_cdf(samples[i]);
    sup = std::max(sup, std::fabs(static_cast<double>(i + 1) / m - cdf));
    sup = std::max(sup, std::fabs(static_cast<double>(i) / m - cdf));
  }
  return sup;
}

double wasserstein1_distance(std::vector<double> samples) {
  require_sample(samples, 1, "wasserstein1_distance");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double q = normal_quantile((static_cast<double>(i) + 0.5) / m);
    acc += std::fabs(samples[i] - q);
  }
  return acc / m;
}

Cumulants empirical_cumulants(const std::vector<double>& samples) {
  require_sample(samples, 10, "empirical_cumulants");
  const std::size_t n = samples.size();
  const double nn = static_cast<double>(n);

  // Center on the sample mean before accumulating power sums so that the
  // jackknife downdates stay well conditioned.
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= nn;

  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : samples) {
    double d = x - mean;
    double d2 = d * d;
    s1 += d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }

  KStats full = kstats_from_power_sums(s1, s2, s3, s4, nn);
  if (!(full.k2 > 0.0)) throw invalid_input_error("empirical_cumulants: sample has zero variance");

  Cumulants out;
  out.mean = mean;
  out.k2 = full.k2;
  out.k3 = full.k3;
  out.k4 = full.k4;
  out.skewness = full.g3;
  out.excess_kurtosis = full.g4;

  // Leave-one-out jackknife on the standardized statistics; each replicate
  // is an O(1) downdate of the power sums.
  double g3_sum = 0.0, g4_sum = 0.0;
  std::vector<double> g3s(n), g4s(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = samples[i] - mean;
    double d2 = d * d;
    KStats loo = kstats_from_power_sums(s1 - d, s2 - d2, s3 - d2 * d, s4 - d2 * d2, nn - 1.0);
    g3s[i] = loo.g3;
    g4s[i] = loo.g4;
    g3_sum += loo.g3;
    g4_sum += loo.g4;
  }
  const double g3_bar = g3_sum / nn;
  const double g4_bar = g4_sum / nn;
  double v3 = 0.0, v4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v3 += (g3s[i] - g3_bar) * (g3s[i] - g3_bar);
    v4 += (g4s[i] - g4_bar) * (g4s[i] - g4_bar);
  }
  out.skewness_se = std::sqrt((nn - 1.0) / nn * v3);
  out.excess_kurtosis_se = std::sqrt((nn - 1.0) / nn * v4);
  return out;
}

RateFit loglog_rate_fit(const std::vector<std::pair<double, double>>& scale_value) {
  if (scale_value.size() < 3)
    throw invalid_input_error("loglog_rate_fit: needs at least three scales");
  for (std::size_t i = 0; i < scale_value.size(); ++i) {
    auto [x, y] = scale_value[i];
    if (!(x > 0.0) || !(y > 0.0))
      throw invalid_input_error("loglog_rate_fit: scales and values must be positive");
    if (i > 0 && !(x > scale_value[i - 1].first))
      throw invalid_input_error("loglog_rate_fit: scales must be strictly increasing");
  }
  const double k = static_cast<double>(scale_value.size());
  double sx = 0.0, sy = 0.0;
  for (auto [x, y] : scale_value) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double xbar = sx / k, ybar = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (auto [x, y] : scale_value) {
    double dx = std::log(x) - xbar;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - ybar);
  }
  RateFit fit;
  fit.points = scale_value.size();
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ssr = 0.0;
  for (auto [x, y] : scale_value) {
    double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    ssr += r * r;
  }
  const std::size_t df = scale_value.size() - 2;
  fit.slope_se = std::sqrt(std::max(0.0, ssr / static_cast<double>(df)) / sxx);
  const double half = t95(df) * fit.slope_se;
  fit.ci_low = fit.slope - half;
  fit.ci_high = fit.slope + half;
  return fit;
}

}  // namespace gpsm
