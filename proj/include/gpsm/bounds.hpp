#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "gpsm/kernels.hpp"

namespace gpsm {

/// Both arguments of the distance-bound maximum, kept separately so the
/// kappa3/kappa4 crossover stays observable.
struct PhiBound {
  double kappa3_term = 0.0;  // 8 / sqrt(T) * (L^{3/2} integral)^2
  double kappa4_term = 0.0;  // 48 / T * (L^{4/3} integral)^3
  double value() const { return std::max(kappa3_term, kappa4_term); }
};

/// 8 / sqrt(T) * (integral_{-T}^{T} |rho|^{3/2})^2.
double kappa3_bound(const Kernel& kernel, double T);

/// 48 / T * (integral_{-T}^{T} |rho|^{4/3})^3.
double kappa4_bound(const Kernel& kernel, double T);

/// Envelope phi_T = max of the two cumulant terms (absolute constant set
/// to 1; see BoundReport).
PhiBound phi_bound(const Kernel& kernel, double T);

/// Kolmogorov/total-variation bound for the exactly standardized continuous
/// statistic: the envelope itself.
double tv_bound_continuous(const Kernel& kernel, double T);

/// Exact variance of U_n = sqrt(T_n) (f_tilde - f_Z) by the Toeplitz double
/// sum (2 T_n / n^2) [n rho(0)^2 + 2 sum_l (n - l) rho(l delta)^2].
double var_un_discrete(const Kernel& kernel, std::size_t n, double delta);

/// Discrete-observation bound: phi + 2 |1 - var_cont / var_disc| +
/// (n delta^(2 alpha + 1))^(1/4).  Requires n * delta == T_n (1e-9 relative).
double tv_bound_discrete(const Kernel& kernel, double T_n, std::size_t n, double delta,
                         double alpha, double var_cont, double var_disc);

/// (n delta^(2 alpha + 1))^(1/4).
double discretization_penalty(std::size_t n, double delta, double alpha);

/// 2 |1 - sigma_Z^2 / Var(V_T)|: price of standardizing by the limit
/// variance instead of the exact one.
double sigma_correction(const Kernel& kernel, double T);

/// Asymptotically stationary start whose transient decays like t^(-gamma),
/// gamma > 1: phi_T + T^((1-gamma)/4).
double nonstat_bound(const Kernel& kernel, double T, double gamma);

/// Discrete variant: adds the discretization penalty.
double nonstat_tilde_bound(const Kernel& kernel, std::size_t n, double delta, double gamma);

/// Predicted log-log slope (and log power) of a bound as a function of the
/// kernel decay index beta in (0, 3/4).
struct RateExponent {
  double exponent = 0.0;
  int log_power = 0;
};
enum class RateTarget { tv_hat, sigma_normalized };
RateExponent rate_exponent(double beta, RateTarget target);

/// Asymptotic variance of sqrt(T) (theta_hat - theta) for the first-kind
/// fOU drift estimator; two Gamma-product branches met at H = 1/2.
double delta_h_sq(double hurst, double theta);

/// Wasserstein rate bound for the standardized first-kind drift estimator:
/// T^(-1/2) for H <= 5/8, else T^(4H-3).
double ou1_rate_bound(double hurst, double T);

/// Discrete version: (n delta^(2H+1))^(1/2) + the continuous form at
/// T = n delta.
double ou1_rate_bound_discrete(double hurst, std::size_t n, double delta);

/// Every bound term for one (kernel, T) cell, optionally joined with a
/// discrete design and a transient decay rate.  Terms that do not apply
/// stay unset.
struct BoundReport {
  std::string kernel;
  double T = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  double phi = 0.0;
  double var_vt_value = 0.0;
  double sigma_z_sq_value = 0.0;
  double sigma_correction_value = 0.0;
  std::optional<std::size_t> n;
  std::optional<double> delta;
  std::optional<double> discrete_penalty;
  std::optional<double> var_un_value;
  std::optional<double> variance_ratio_term;  // 2 |1 - var_cont / var_disc|
  std::optional<double> tilde_total;
  std::optional<double> gamma;
  std::optional<double> nonstat_penalty;
  std::optional<RateExponent> rate_tv_hat;
  std::optional<RateExponent> rate_sigma_normalized;

  nlohmann::json to_json() const;
};

BoundReport make_bound_report(const Kernel& kernel, double T,
                              std::optional<std::pair<std::size_t, double>> discrete,
                              std::optional<double> gamma);

}  // namespace gpsm
