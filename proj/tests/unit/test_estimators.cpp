#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gpsm/errors.hpp"
#include "gpsm/estimators.hpp"
#include "gpsm/path.hpp"

using namespace gpsm;

namespace {

Path make_path(std::vector<double> values, double delta) {
  GridSpec grid = GridSpec::uniform(values.size() - 1, delta);
  return Path{grid, std::move(values), PathKind::stationary, SeedSpec{}};
}

}  // namespace

TEST_CASE("f_hat is the trapezoid average of the squared path") {
  // constant path: time average of squares is the constant squared
  CHECK(f_hat_continuous(make_path({2.0, 2.0, 2.0}, 0.5)) == Catch::Approx(4.0).epsilon(1e-15));
  // three points 0, 1, 2 with delta 1: trapezoid of squares over [0, 2]
  // = (0/2 + 1 + 4/2) / 2 = 1.5
  CHECK(f_hat_continuous(make_path({0.0, 1.0, 2.0}, 1.0)) == Catch::Approx(1.5).epsilon(1e-15));
  // linear path values t over [0,1]; fine grid approximates 1/3
  std::vector<double> lin(101);
  for (int i = 0; i <= 100; ++i) lin[i] = i / 100.0;
  CHECK(f_hat_continuous(make_path(lin, 0.01)) == Catch::Approx(1.0 / 3.0).margin(2e-5));
}

TEST_CASE("f_tilde averages squares excluding the starting point") {
  CHECK(f_tilde_discrete(make_path({2.0, 1.0, 3.0}, 1.0)) == Catch::Approx(5.0).epsilon(1e-15));
  CHECK(f_tilde_discrete(std::vector<double>{1.0, 3.0}) == Catch::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("standardize and estimate records") {
  CHECK(standardize(3.0, 1.0, 4.0) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(standardize(3.0, 1.0, 0.0), invalid_input_error);
  CHECK_THROWS_AS(standardize(3.0, 1.0, -1.0), invalid_input_error);

  Path path = make_path({1.0, 1.0, 1.0, 1.0}, 0.5);  // T = 1.5, f_hat = f_tilde = 1
  EstimateRecord with_truth = make_estimate_record(path, 0.5);
  REQUIRE(with_truth.v_stat.has_value());
  CHECK(*with_truth.v_stat == Catch::Approx(std::sqrt(1.5) * 0.5).epsilon(1e-14));
  CHECK(*with_truth.u_stat == Catch::Approx(std::sqrt(1.5) * 0.5).epsilon(1e-14));
  CHECK(*with_truth.delta_stat == Catch::Approx(0.0).margin(1e-14));

  EstimateRecord without = make_estimate_record(path, std::nullopt);
  CHECK_FALSE(without.v_stat.has_value());
  auto j = without.to_json();
  CHECK(j.at("T").get<double>() == Catch::Approx(1.5));
  CHECK(j.at("n").get<std::size_t>() == 3);
  CHECK(j.at("v_stat").is_null());
}

TEST_CASE("fou1 stationary moment closed forms") {
  // H = 1/2 reduces to the OU variance 1 / (2 theta)
  CHECK(fou1_stationary_moment(1.0, 0.5) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(fou1_stationary_moment(2.0, 0.5) == Catch::Approx(0.25).epsilon(1e-14));
  // general H: H Gamma(2H) theta^{-2H}
  CHECK(fou1_stationary_moment(1.0, 0.7) ==
        Catch::Approx(0.7 * std::tgamma(1.4)).epsilon(1e-13));
  CHECK(fou1_stationary_moment(3.0, 0.25) ==
        Catch::Approx(0.25 * std::tgamma(0.5) * std::pow(3.0, -0.5)).epsilon(1e-13));
}

TEST_CASE("fou1 drift inverts its moment map") {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double hurst : {0.3, 0.55, 0.7}) {
      double moment = fou1_stationary_moment(theta, hurst);
      CHECK(drift_fou1(moment, hurst) == Catch::Approx(theta).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(drift_fou1(0.0, 0.5), invalid_input_error);
  CHECK_THROWS_AS(drift_fou1(-1.0, 0.5), invalid_input_error);
}

TEST_CASE("fou2 moment map closed forms at mu = 1") {
  // g^{-1}(1) = (2H-1) H^{2H} B(1, 2H-1) = H^{2H}
  for (double hurst : {0.55, 0.6, 0.7, 0.8, 0.9}) {
    CHECK(g_inverse_fou2(1.0, hurst) ==
          Catch::Approx(std::pow(hurst, 2.0 * hurst)).epsilon(1e-12));
  }
  CHECK(g_inverse_fou2(1.0, 0.6) == Catch::Approx(std::pow(0.6, 1.2)).epsilon(1e-12));
}

TEST_CASE("fou2 moment map is decreasing in mu") {
  double prev = g_inverse_fou2(0.125, 0.65);
  for (double mu : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    double cur = g_inverse_fou2(mu, 0.65);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("fou2 drift inverts its moment map") {
  for (double mu : {0.25, 1.0, 4.0}) {
    for (double hurst : {0.55, 0.65, 0.8}) {
      double moment = g_inverse_fou2(mu, hurst);
      CHECK(drift_fou2(moment, hurst) == Catch::Approx(mu).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(g_inverse_fou2(0.0, 0.6), invalid_input_error);
  CHECK_THROWS_AS(g_inverse_fou2(1.0, 0.5), invalid_input_error);
  CHECK_THROWS_AS(g_inverse_fou2(1.0, 1.0), invalid_input_error);
  CHECK_THROWS_AS(drift_fou2(0.0, 0.6), invalid_input_error);
}

TEST_CASE("drift model facade dispatches to the right maps") {
  DriftModel m1 = DriftModel::fou1(0.6);
  CHECK(m1.stationary_moment(1.5) == Catch::Approx(fou1_stationary_moment(1.5, 0.6)));
  CHECK(m1.drift_from_moment(m1.stationary_moment(1.5)) == Catch::Approx(1.5).epsilon(1e-10));
  DriftModel m2 = DriftModel::fou2(0.7);
  CHECK(m2.stationary_moment(2.0) == Catch::Approx(g_inverse_fou2(2.0, 0.7)));
  CHECK(m2.drift_from_moment(m2.stationary_moment(2.0)) == Catch::Approx(2.0).epsilon(1e-9));
}
