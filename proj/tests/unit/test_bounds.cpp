#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gpsm/bounds.hpp"
#include "gpsm/errors.hpp"
#include "gpsm/kernels.hpp"
#include "gpsm/stats.hpp"

using namespace gpsm;

namespace {

// Independent closed forms for exp_ou(theta, v):
//   L^p(T) = 2 v^p (1 - e^{-p theta T}) / (p theta)
double exp_ou_lp(double theta, double v, double p, double T) {
  return 2.0 * std::pow(v, p) * (1.0 - std::exp(-p * theta * T)) / (p * theta);
}

}  // namespace

TEST_CASE("cumulant bounds against exp_ou antiderivatives") {
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  double l32 = exp_ou_lp(1.0, 1.0, 1.5, 100.0);
  double l43 = exp_ou_lp(1.0, 1.0, 4.0 / 3.0, 100.0);
  CHECK(kappa3_bound(k, 100.0) == Catch::Approx(0.8 * l32 * l32).epsilon(1e-9));
  CHECK(kappa4_bound(k, 100.0) == Catch::Approx(0.48 * l43 * l43 * l43).epsilon(1e-9));
  // headline values
  CHECK(kappa3_bound(k, 100.0) == Catch::Approx(1.42222).margin(1e-4));
  CHECK(kappa4_bound(k, 100.0) == Catch::Approx(1.62).margin(1e-4));
  PhiBound phi = phi_bound(k, 100.0);
  CHECK(phi.value() == Catch::Approx(std::max(phi.kappa3_term, phi.kappa4_term)));
  CHECK(tv_bound_continuous(k, 100.0) == Catch::Approx(phi.value()));
}

TEST_CASE("cumulant bounds are homogeneous of degree 3 and 4 in the variance") {
  for (double v : {0.5, 2.0, 3.0}) {
    Kernel base = Kernel::exp_ou(1.3, 1.0);
    Kernel scaled = Kernel::exp_ou(1.3, v);
    CHECK(kappa3_bound(scaled, 50.0) ==
          Catch::Approx(std::pow(v, 3.0) * kappa3_bound(base, 50.0)).epsilon(1e-10));
    CHECK(kappa4_bound(scaled, 50.0) ==
          Catch::Approx(std::pow(v, 4.0) * kappa4_bound(base, 50.0)).epsilon(1e-10));
    Kernel gbase = Kernel::gen_cauchy(0.6, 1.0);
    Kernel gscaled = Kernel::gen_cauchy(0.6, v);
    CHECK(kappa3_bound(gscaled, 20.0) ==
          Catch::Approx(std::pow(v, 3.0) * kappa3_bound(gbase, 20.0)).epsilon(1e-9));
    CHECK(kappa4_bound(gscaled, 20.0) ==
          Catch::Approx(std::pow(v, 4.0) * kappa4_bound(gbase, 20.0)).epsilon(1e-9));
  }
}

TEST_CASE("kappa3/kappa4 crossover is stable under quadrature tolerance") {
  // For exp_ou(1,1) the max switches from the kappa4 term to the kappa3 term
  // near T* = (48 * 1.5^3 / (8 * (4/3)^2))^2.  Locate the switch by bisection
  // with two different tolerance settings and compare.
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  auto crossover = [&k](const QuadOptions& opts) {
    double lo = 50.0, hi = 300.0;
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      double l32 = lp_integral(k, 1.5, mid, opts);
      double l43 = lp_integral(k, 4.0 / 3.0, mid, opts);
      double k3 = 8.0 / std::sqrt(mid) * l32 * l32;
      double k4 = 48.0 / mid * l43 * l43 * l43;
      (k4 > k3 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  QuadOptions tight;
  QuadOptions loose;
  loose.rel_tol = tight.rel_tol * 10.0;
  loose.abs_tol = tight.abs_tol * 10.0;
  double t_tight = crossover(tight);
  double t_loose = crossover(loose);
  double c3 = 8.0 * std::pow(4.0 / 3.0, 2.0);
  double c4 = 48.0 * std::pow(1.5, 3.0);
  double t_closed = std::pow(c4 / c3, 2.0);
  CHECK(t_tight == Catch::Approx(t_closed).epsilon(1e-6));
  CHECK(t_loose == Catch::Approx(t_tight).epsilon(1e-6));
}

TEST_CASE("phi slope follows the predicted rate exponent") {
  // exp_ou: integrable rho, kappa3 dominates for large T, slope -1/2
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  for (double T : {1e2, 1e3, 1e4, 1e5}) pts.emplace_back(T, tv_bound_continuous(k, T));
  RateFit fit = loglog_rate_fit(pts);
  CHECK(std::fabs(fit.slope - (-0.5)) < 0.05);

  // gen_cauchy beta = 0.7: predicted exponent 6 beta - 9/2 = -0.3
  Kernel g = Kernel::gen_cauchy(0.7, 1.0);
  std::vector<std::pair<double, double>> gpts;
  for (double T : {1e2, 1e3, 1e4, 1e5}) gpts.emplace_back(T, tv_bound_continuous(g, T));
  RateFit gfit = loglog_rate_fit(gpts);
  double predicted = rate_exponent(0.7, RateTarget::tv_hat).exponent;
  CHECK(std::fabs(gfit.slope - predicted) < 0.05);
}

TEST_CASE("sigma correction value and monotonicity") {
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  // 2 |1 - 2 / (1 + e^{-2})| = 2 tanh(1)
  CHECK(sigma_correction(k, 1.0) == Catch::Approx(2.0 * std::tanh(1.0)).epsilon(1e-9));
  double prev = sigma_correction(k, 1.0);
  for (double T : {2.0, 5.0, 10.0, 50.0, 100.0}) {
    double cur = sigma_correction(k, T);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("discrete variance double sum") {
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  // brute force for n = 5
  std::size_t n = 5;
  double delta = 0.3;
  double acc = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      double r = k.rho(delta * (static_cast<double>(i) - static_cast<double>(j)));
      acc += 2.0 * r * r;
    }
  double T = static_cast<double>(n) * delta;
  double expected = T * acc / static_cast<double>(n * n);
  CHECK(var_un_discrete(k, n, delta) == Catch::Approx(expected).epsilon(1e-12));

  // refinement limit: var_un -> var_VT as delta -> 0 at fixed T
  double target = var_vt(k, 10.0);
  double prev_gap = 1e9;
  for (std::size_t steps : {100, 400, 1600, 6400}) {
    double gap = std::fabs(var_un_discrete(k, steps, 10.0 / steps) - target);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}

TEST_CASE("discretization penalty and tilde bound") {
  CHECK(discretization_penalty(10000, 0.01, 0.5) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(discretization_penalty(100, 0.1, 1.0) ==
        Catch::Approx(std::pow(100.0 * std::pow(0.1, 3.0), 0.25)).epsilon(1e-12));
  CHECK_THROWS_AS(discretization_penalty(100, 0.1, 0.0), invalid_input_error);
  CHECK_THROWS_AS(discretization_penalty(100, 0.1, 1.5), invalid_input_error);

  Kernel k = Kernel::exp_ou(1.0, 1.0);
  double T = 100.0;
  std::size_t n = 10000;
  double delta = 0.01;
  double vc = var_vt(k, T);
  double vd = var_un_discrete(k, n, delta);
  double total = tv_bound_discrete(k, T, n, delta, 0.5, vc, vd);
  CHECK(total == Catch::Approx(tv_bound_continuous(k, T) + 2.0 * std::fabs(1.0 - vc / vd) +
                               1.0).epsilon(1e-10));
  CHECK_THROWS_AS(tv_bound_discrete(k, 99.0, n, delta, 0.5, vc, vd), invalid_input_error);
  CHECK_THROWS_AS(tv_bound_discrete(k, T, n, delta, 0.5, vc, 0.0), invalid_input_error);
}

TEST_CASE("nonstationary penalty") {
  Kernel k = Kernel::exp_ou(1.0, 1.0);
  CHECK(nonstat_bound(k, 16.0, 5.0) ==
        Catch::Approx(tv_bound_continuous(k, 16.0) + 1.0 / 16.0).epsilon(1e-12));
  CHECK(nonstat_tilde_bound(k, 160, 0.1, 5.0) ==
        Catch::Approx(tv_bound_continuous(k, 16.0) + discretization_penalty(160, 0.1, 0.5) +
                      1.0 / 16.0).epsilon(1e-10));
  CHECK_THROWS_AS(nonstat_bound(k, 16.0, 1.0), invalid_input_error);
  CHECK_THROWS_AS(nonstat_bound(k, 16.0, 0.5), invalid_input_error);
}

TEST_CASE("rate exponent branches") {
  // slow-decay branch: exponent -1/2, no log factor
  for (double beta : {0.1, 0.3, 0.5, 0.6, 0.66}) {
    RateExponent r = rate_exponent(beta, RateTarget::tv_hat);
    CHECK(r.exponent == Catch::Approx(-0.5));
    CHECK(r.log_power == 0);
  }
  // knee at beta = 2/3 carries the squared log factor
  RateExponent knee = rate_exponent(2.0 / 3.0, RateTarget::tv_hat);
  CHECK(knee.exponent == Catch::Approx(-0.5));
  CHECK(knee.log_power == 2);
  // fast-decay branch: 6 beta - 9/2
  CHECK(rate_exponent(0.7, RateTarget::tv_hat).exponent ==
        Catch::Approx(6.0 * 0.7 - 4.5).epsilon(1e-12));
  CHECK(rate_exponent(0.74, RateTarget::tv_hat).exponent ==
        Catch::Approx(6.0 * 0.74 - 4.5).epsilon(1e-12));

  // sigma-normalized: knee at 5/8
  CHECK(rate_exponent(0.625, RateTarget::sigma_normalized).exponent == Catch::Approx(-0.5));
  CHECK(rate_exponent(0.5, RateTarget::sigma_normalized).exponent == Catch::Approx(-0.5));
  CHECK(rate_exponent(0.7, RateTarget::sigma_normalized).exponent ==
        Catch::Approx(4.0 * 0.7 - 3.0).epsilon(1e-12));
  CHECK(rate_exponent(0.625, RateTarget::sigma_normalized).log_power == 0);

  CHECK_THROWS_AS(rate_exponent(0.75, RateTarget::tv_hat), invalid_input_error);
  CHECK_THROWS_AS(rate_exponent(0.0, RateTarget::tv_hat), invalid_input_error);
  CHECK_THROWS_AS(rate_exponent(-0.1, RateTarget::sigma_normalized), invalid_input_error);
}

TEST_CASE("drift estimator asymptotic variance") {
  CHECK(delta_h_sq(0.5, 1.0) == Catch::Approx(2.0).epsilon(1e-12));
  // linear in theta
  CHECK(delta_h_sq(0.5, 3.0) == Catch::Approx(6.0).epsilon(1e-12));
  CHECK(delta_h_sq(0.65, 2.0) == Catch::Approx(2.0 * delta_h_sq(0.65, 1.0)).epsilon(1e-12));
  // H = 1/4: lead 4, first factor 0, Gamma ratio 1/pi -> 8/pi
  CHECK(delta_h_sq(0.25, 1.0) == Catch::Approx(8.0 / std::acos(-1.0)).epsilon(1e-12));
  // independent tgamma evaluation of the upper branch
  double h = 0.7;
  double expected = (1.0 / (4.0 * h * h)) * (4.0 * h - 1.0) *
                    (1.0 + std::tgamma(3.0 - 4.0 * h) * std::tgamma(4.0 * h - 1.0) /
                               (std::tgamma(2.0 - 2.0 * h) * std::tgamma(2.0 * h)));
  CHECK(delta_h_sq(h, 1.0) == Catch::Approx(expected).epsilon(1e-12));
  // continuity across the branch point
  CHECK(delta_h_sq(0.5 - 1e-7, 1.0) == Catch::Approx(2.0).margin(1e-4));
  CHECK(delta_h_sq(0.5 + 1e-7, 1.0) == Catch::Approx(2.0).margin(1e-4));
  CHECK_THROWS_AS(delta_h_sq(0.75, 1.0), invalid_input_error);
  CHECK_THROWS_AS(delta_h_sq(0.5, 0.0), invalid_input_error);
}

TEST_CASE("first-kind drift rate bound branches") {
  CHECK(ou1_rate_bound(0.5, 100.0) == Catch::Approx(0.1).epsilon(1e-13));
  CHECK(ou1_rate_bound(0.625, 100.0) == Catch::Approx(0.1).epsilon(1e-13));
  CHECK(ou1_rate_bound(0.7, 100.0) ==
        Catch::Approx(std::pow(100.0, -0.2)).epsilon(1e-12));
  CHECK(ou1_rate_bound_discrete(0.6, 10000, 0.01) ==
        Catch::Approx(std::pow(10.0, -0.2) + 0.1).epsilon(1e-12));
  CHECK_THROWS_AS(ou1_rate_bound(0.8, 10.0), invalid_input_error);
}

TEST_CASE("bound report assembles every term") {
  Kernel k = Kernel::gen_cauchy(0.7, 1.0);
  BoundReport r = make_bound_report(k, 100.0, std::make_pair(std::size_t{1000}, 0.1), 3.0);
  CHECK(r.kappa3 == Catch::Approx(kappa3_bound(k, 100.0)));
  CHECK(r.kappa4 == Catch::Approx(kappa4_bound(k, 100.0)));
  CHECK(r.phi == Catch::Approx(std::max(r.kappa3, r.kappa4)));
  REQUIRE(r.discrete_penalty.has_value());
  REQUIRE(r.variance_ratio_term.has_value());
  REQUIRE(r.tilde_total.has_value());
  CHECK(*r.tilde_total ==
        Catch::Approx(r.phi + *r.variance_ratio_term + *r.discrete_penalty).epsilon(1e-12));
  REQUIRE(r.nonstat_penalty.has_value());
  CHECK(*r.nonstat_penalty == Catch::Approx(std::pow(100.0, -0.5)).epsilon(1e-12));
  REQUIRE(r.rate_tv_hat.has_value());
  CHECK(r.rate_tv_hat->exponent == Catch::Approx(-0.3).epsilon(1e-10));

  auto j = r.to_json();
  CHECK(j.at("kappa3_bound").get<double>() == Catch::Approx(r.kappa3));
  CHECK(j.at("rate_sigma_normalized").at("exponent").get<double>() ==
        Catch::Approx(4.0 * 0.7 - 3.0).epsilon(1e-10));

  // exp_ou has no decay index, so no rate prediction
  BoundReport plain = make_bound_report(Kernel::exp_ou(1.0, 1.0), 10.0, std::nullopt,
                                        std::nullopt);
  CHECK_FALSE(plain.rate_tv_hat.has_value());
  CHECK(plain.to_json().at("rate_tv_hat").is_null());
  CHECK_THROWS_AS(
      make_bound_report(k, 100.0, std::make_pair(std::size_t{1000}, 0.2), std::nullopt),
      invalid_input_error);
}
