#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gpsm/errors.hpp"
#include "gpsm/mathutil.hpp"
#include "gpsm/quadrature.hpp"

using namespace gpsm;

TEST_CASE("integrate handles polynomials and oscillations") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi) ==
        Catch::Approx(2.0).epsilon(1e-12));
  // 40 oscillation periods
  CHECK(integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 2.0 * kPi) ==
        Catch::Approx(0.0).margin(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        Catch::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
}

TEST_CASE("integrate orientation and degenerate interval") {
  CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) ==
        Catch::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("integrate rejects non-finite integrands") {
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(x - 2.0); }, 0.0, 1.0),
                  numeric_error);
}

TEST_CASE("algebraic tail map integrates power decay exactly enough") {
  // integral_1^inf t^-2 dt = 1
  CHECK(integrate_tail_algebraic([](double t) { return 1.0 / (t * t); }, 1.0, 2.0) ==
        Catch::Approx(1.0).epsilon(1e-11));
  // integral_4^inf t^-1.5 dt = 2 / sqrt(4) = 1
  CHECK(integrate_tail_algebraic([](double t) { return std::pow(t, -1.5); }, 4.0, 1.5) ==
        Catch::Approx(1.0).epsilon(1e-11));
  // mixed decay: integral_1^inf t^-3 (1 + 1/t) dt = 1/2 + 1/3
  CHECK(integrate_tail_algebraic([](double t) { return (1.0 + 1.0 / t) / (t * t * t); }, 1.0,
                                 3.0) == Catch::Approx(5.0 / 6.0).epsilon(1e-11));
  CHECK_THROWS_AS(integrate_tail_algebraic([](double t) { return 1.0 / t; }, 1.0, 1.0),
                  invalid_input_error);
  CHECK_THROWS_AS(integrate_tail_algebraic([](double t) { return 1.0 / t; }, -1.0, 2.0),
                  invalid_input_error);
}

TEST_CASE("exponential tail map") {
  CHECK(integrate_tail_exponential([](double t) { return std::exp(-t); }, 2.0, 1.0) ==
        Catch::Approx(std::exp(-2.0)).epsilon(1e-11));
  CHECK(integrate_tail_exponential([](double t) { return t * std::exp(-3.0 * t); }, 0.0, 3.0) ==
        Catch::Approx(1.0 / 9.0).epsilon(1e-11));
  CHECK_THROWS_AS(integrate_tail_exponential([](double t) { return t; }, 0.0, 0.0),
                  invalid_input_error);
}

TEST_CASE("alternating series acceleration hits classic limits") {
  // sum (-1)^k / (k+1) = ln 2
  CHECK(alternating_sum([](int k) { return 1.0 / (k + 1.0); }, 40) ==
        Catch::Approx(std::log(2.0)).epsilon(1e-14));
  // sum (-1)^k / (2k+1) = pi / 4
  CHECK(alternating_sum([](int k) { return 1.0 / (2.0 * k + 1.0); }, 40) ==
        Catch::Approx(kPi / 4.0).epsilon(1e-14));
  // eta(2) = pi^2 / 12
  CHECK(alternating_sum([](int k) { return 1.0 / ((k + 1.0) * (k + 1.0)); }, 40) ==
        Catch::Approx(kPi * kPi / 12.0).epsilon(1e-13));
  CHECK_THROWS_AS(alternating_sum([](int) { return 1.0; }, 0), invalid_input_error);
  CHECK_THROWS_AS(alternating_sum([](int) { return 1.0; }, 1000), invalid_input_error);
}

TEST_CASE("tolerances are honored") {
  QuadOptions loose;
  loose.rel_tol = 1e-4;
  loose.abs_tol = 1e-6;
  double coarse = integrate([](double x) { return std::exp(-x * x); }, 0.0, 5.0, loose);
  double fine = integrate([](double x) { return std::exp(-x * x); }, 0.0, 5.0);
  double truth = 0.5 * std::sqrt(kPi) * std::erf(5.0);
  CHECK(std::fabs(coarse - truth) < 1e-4);
  CHECK(std::fabs(fine - truth) < 1e-11);
}
