#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gpsm/errors.hpp"
#include "gpsm/mathutil.hpp"
#include "gpsm/rng.hpp"
#include "gpsm/stats.hpp"

using namespace gpsm;

TEST_CASE("kolmogorov distance on tiny samples") {
  // one sample at the median: both step corners are 1/2 away
  CHECK(kolmogorov_distance({0.0}) == Catch::Approx(0.5).epsilon(1e-15));

  // three points: enumerate all six corners by hand
  std::vector<double> xs = {-1.0, 0.0, 1.0};
  double expected = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double hi = static_cast<double>(i + 1) / 3.0;
    double lo = static_cast<double>(i) / 3.0;
    double f = normal_cdf(xs[i]);
    expected = std::max({expected, std::fabs(hi - f), std::fabs(lo - f)});
  }
  CHECK(expected == Catch::Approx(1.0 / 3.0 - normal_cdf(-1.0)).epsilon(1e-15));
  CHECK(kolmogorov_distance(xs) == Catch::Approx(expected).epsilon(1e-15));

  // order must not matter
  CHECK(kolmogorov_distance({1.0, -1.0, 0.0}) == Catch::Approx(expected).epsilon(1e-15));
}

TEST_CASE("kolmogorov distance of a true normal sample is small") {
  PhiloxRng rng(SeedSpec{99, 0});
  std::vector<double> xs(20000);
  for (double& x : xs) x = rng.next_normal();
  double dk = kolmogorov_distance(xs);
  CHECK(dk > 0.0);
  CHECK(dk < 0.02);  // typical value ~ 0.6 / sqrt(m) ~ 0.004
}

TEST_CASE("wasserstein distance via the quantile coupling") {
  // a sample placed exactly at the plotting-position quantiles has distance 0
  std::size_t m = 1000;
  std::vector<double> exact(m);
  for (std::size_t i = 0; i < m; ++i)
    exact[i] = normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(m));
  CHECK(wasserstein1_distance(exact) == Catch::Approx(0.0).margin(1e-12));

  // a point mass at zero: average |quantile| tends to E|Z| = sqrt(2/pi)
  std::vector<double> zeros(100000, 0.0);
  CHECK(wasserstein1_distance(zeros) ==
        Catch::Approx(std::sqrt(2.0 / std::acos(-1.0))).margin(1e-3));

  // translation moves the coupling by at most (and here exactly) the shift
  std::vector<double> shifted = exact;
  for (double& x : shifted) x += 0.25;
  CHECK(wasserstein1_distance(shifted) == Catch::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("k-statistics match a longhand computation") {
  std::vector<double> xs = {1.5, 2.0, -0.3, 4.2, 0.7, 1.1, -2.5, 3.3, 0.0, 2.2, 5.1, -1.4};
  double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  double k2 = n * m2 / (n - 1.0);
  double k3 = n * n * m3 / ((n - 1.0) * (n - 2.0));
  double k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
              ((n - 1.0) * (n - 2.0) * (n - 3.0));

  Cumulants c = empirical_cumulants(xs);
  CHECK(c.mean == Catch::Approx(mean).epsilon(1e-13));
  CHECK(c.k2 == Catch::Approx(k2).epsilon(1e-12));
  CHECK(c.k3 == Catch::Approx(k3).epsilon(1e-12));
  CHECK(c.k4 == Catch::Approx(k4).epsilon(1e-12));
  CHECK(c.skewness == Catch::Approx(k3 / std::pow(k2, 1.5)).epsilon(1e-12));
  CHECK(c.excess_kurtosis == Catch::Approx(k4 / (k2 * k2)).epsilon(1e-12));
  CHECK(c.skewness_se > 0.0);
  CHECK(c.excess_kurtosis_se > 0.0);
}

TEST_CASE("k-statistics recover chi-square shape parameters") {
  // squares of standard normals: skewness sqrt(8), excess kurtosis 12
  PhiloxRng rng(SeedSpec{7, 1});
  std::vector<double> xs(20000);
  for (double& x : xs) {
    double z = rng.next_normal();
    x = z * z;
  }
  Cumulants c = empirical_cumulants(xs);
  CHECK(c.mean == Catch::Approx(1.0).margin(0.05));
  CHECK(c.k2 == Catch::Approx(2.0).margin(0.2));
  CHECK(c.skewness == Catch::Approx(std::sqrt(8.0)).margin(0.5));
  CHECK(c.excess_kurtosis == Catch::Approx(12.0).margin(6.0));
}

TEST_CASE("jackknife errors track the normal-theory rates") {
  PhiloxRng rng(SeedSpec{21, 4});
  std::size_t n = 5000;
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.next_normal();
  Cumulants c = empirical_cumulants(xs);
  double se3 = std::sqrt(6.0 / static_cast<double>(n));
  double se4 = std::sqrt(24.0 / static_cast<double>(n));
  CHECK(c.skewness_se > 0.5 * se3);
  CHECK(c.skewness_se < 2.0 * se3);
  CHECK(c.excess_kurtosis_se > 0.5 * se4);
  CHECK(c.excess_kurtosis_se < 2.0 * se4);
  // and the true values sit inside generous jackknife bands
  CHECK(std::fabs(c.skewness) < 4.0 * c.skewness_se);
  CHECK(std::fabs(c.excess_kurtosis) < 4.0 * c.excess_kurtosis_se);
}

TEST_CASE("cumulant input validation") {
  CHECK_THROWS_AS(empirical_cumulants({1, 2, 3, 4, 5, 6, 7, 8, 9}), invalid_input_error);
  CHECK_THROWS_AS(empirical_cumulants(std::vector<double>(12, 3.14)), invalid_input_error);
  std::vector<double> with_nan(20, 1.0);
  with_nan[3] = std::nan("");
  with_nan[5] = 2.0;
  CHECK_THROWS_AS(empirical_cumulants(with_nan), invalid_input_error);
}

TEST_CASE("log-log fit recovers an exact power law") {
  std::vector<std::pair<double, double>> pts;
  for (double s : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(s, 3.0 * std::pow(s, -0.7));
  RateFit fit = loglog_rate_fit(pts);
  CHECK(fit.slope == Catch::Approx(-0.7).epsilon(1e-12));
  CHECK(fit.intercept == Catch::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.slope_se == Catch::Approx(0.0).margin(1e-10));
  CHECK(fit.ci_low == Catch::Approx(-0.7).margin(1e-9));
  CHECK(fit.ci_high == Catch::Approx(-0.7).margin(1e-9));
  CHECK(fit.points == 5);
}

TEST_CASE("log-log fit confidence interval brackets a noisy slope") {
  // perturb an exact power law and make sure the CI stays sensible
  std::vector<std::pair<double, double>> pts;
  PhiloxRng rng(SeedSpec{5, 5});
  for (double s : {10.0, 20.0, 40.0, 80.0, 160.0, 320.0})
    pts.emplace_back(s, std::pow(s, -0.5) * std::exp(0.02 * rng.next_normal()));
  RateFit fit = loglog_rate_fit(pts);
  CHECK(fit.slope == Catch::Approx(-0.5).margin(0.05));
  CHECK(fit.ci_low < fit.slope);
  CHECK(fit.slope < fit.ci_high);
  CHECK(fit.ci_low < -0.5);
  CHECK(fit.ci_high > -0.5);
}

TEST_CASE("log-log fit input validation") {
  CHECK_THROWS_AS(loglog_rate_fit({{1.0, 1.0}, {2.0, 0.5}}), invalid_input_error);
  CHECK_THROWS_AS(loglog_rate_fit({{1.0, 1.0}, {2.0, 0.5}, {2.0, 0.3}}),
                  invalid_input_error);
  CHECK_THROWS_AS(loglog_rate_fit({{1.0, 1.0}, {3.0, 0.5}, {2.0, 0.3}}),
                  invalid_input_error);
  CHECK_THROWS_AS(loglog_rate_fit({{1.0, 1.0}, {2.0, -0.5}, {4.0, 0.3}}),
                  invalid_input_error);
  CHECK_THROWS_AS(loglog_rate_fit({{0.0, 1.0}, {2.0, 0.5}, {4.0, 0.3}}),
                  invalid_input_error);
}
