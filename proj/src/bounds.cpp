#include "gpsm/bounds.hpp"

#include <cmath>
#include <limits>

#include "gpsm/errors.hpp"

namespace gpsm {

namespace {

void require_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw invalid_input_error("horizon T must be positive and finite");
}

}  // namespace

double kappa3_bound(const Kernel& kernel, double T) {
  require_horizon(T);
  double l32 = lp_integral(kernel, 1.5, T);
  return 8.0 / std::sqrt(T) * l32 * l32;
}

double kappa4_bound(const Kernel& kernel, double T) {
  require_horizon(T);
  double l43 = lp_integral(kernel, 4.0 / 3.0, T);
  return 48.0 / T * l43 * l43 * l43;
}

PhiBound phi_bound(const Kernel& kernel, double T) {
  PhiBound b;
  b.kappa3_term = kappa3_bound(kernel, T);
  b.kappa4_term = kappa4_bound(kernel, T);
  return b;
}

double tv_bound_continuous(const Kernel& kernel, double T) { return phi_bound(kernel, T).value(); }

double var_un_discrete(const Kernel& kernel, std::size_t n, double delta) {
  if (n < 1) throw invalid_input_error("var_un_discrete: n must be >= 1");
  if (!(delta > 0.0)) throw invalid_input_error("var_un_discrete: delta must be positive");
  const double T = static_cast<double>(n) * delta;
  double rho0 = kernel.rho(0.0);
  double acc = static_cast<double>(n) * rho0 * rho0;
  const auto& tail = kernel.tail();
  for (std::size_t l = 1; l < n; ++l) {
    double lag = static_cast<double>(l) * delta;
    if (tail.kind == TailDecay::Kind::compact && lag > tail.param) break;
    double r = kernel.rho(lag);
    acc += 2.0 * static_cast<double>(n - l) * r * r;
  }
  return 2.0 * T / (static_cast<double>(n) * static_cast<double>(n)) * acc;
}

double discretization_penalty(std::size_t n, double delta, double alpha) {
  if (n < 1) throw invalid_input_error("discretization penalty: n must be >= 1");
  if (!(delta > 0.0)) throw invalid_input_error("discretization penalty: delta must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw invalid_input_error("discretization penalty: alpha must lie in (0, 1]");
  return std::pow(static_cast<double>(n) * std::pow(delta, 2.0 * alpha + 1.0), 0.25);
}

double tv_bound_discrete(const Kernel& kernel, double T_n, std::size_t n, double delta,
                         double alpha, double var_cont, double var_disc) {
  require_horizon(T_n);
  if (std::fabs(static_cast<double>(n) * delta - T_n) > 1e-9 * std::max(1.0, T_n))
    throw invalid_input_error("tv_bound_discrete: requires n * delta == T_n");
  if (!(var_disc > 0.0)) throw invalid_input_error("tv_bound_discrete: var_disc must be positive");
  if (!(var_cont > 0.0)) throw invalid_input_error("tv_bound_discrete: var_cont must be positive");
  double phi = tv_bound_continuous(kernel, T_n);
  double ratio = 2.0 * std::fabs(1.0 - var_cont / var_disc);
  return phi + ratio + discretization_penalty(n, delta, alpha);
}

double sigma_correction(const Kernel& kernel, double T) {
  require_horizon(T);
  double v = var_vt(kernel, T);
  if (!(v > 0.0)) throw numeric_error("sigma_correction: Var(V_T) is not positive");
  return 2.0 * std::fabs(1.0 - sigma_z_sq(kernel) / v);
}

double nonstat_bound(const Kernel& kernel, double T, double gamma) {
  require_horizon(T);
  if (!(gamma > 1.0)) throw invalid_input_error("nonstat_bound: gamma must exceed 1");
  return tv_bound_continuous(kernel, T) + std::pow(T, (1.0 - gamma) / 4.0);
}

double nonstat_tilde_bound(const Kernel& kernel, std::size_t n, double delta, double gamma) {
  if (!(gamma > 1.0)) throw invalid_input_error("nonstat_tilde_bound: gamma must exceed 1");
  const double T = static_cast<double>(n) * delta;
  return tv_bound_continuous(kernel, T) + discretization_penalty(n, delta, kernel.alpha()) +
         std::pow(T, (1.0 - gamma) / 4.0);
}

RateExponent rate_exponent(double beta, RateTarget target) {
  if (!(beta > 0.0 && beta < 0.75))
    throw invalid_input_error("rate_exponent: beta must lie in (0, 3/4)");
  RateExponent r;
  switch (target) {
    case RateTarget::tv_hat: {
      const double knee = 2.0 / 3.0;
      if (std::fabs(beta - knee) <= 1e-12) {
        r.exponent = -0.5;
        r.log_power = 2;  // kappa3 and kappa4 terms tie: log^2 T factor
      } else if (beta < knee) {
        r.exponent = -0.5;
      } else {
        r.exponent = 6.0 * beta - 4.5;
      }
      break;
    }
    case RateTarget::sigma_normalized: {
      if (beta <= 0.625) {
        r.exponent = -0.5;
      } else {
        r.exponent = 4.0 * beta - 3.0;
      }
      break;
    }
  }
  return r;
}

double delta_h_sq(double hurst, double theta) {
  if (!(theta > 0.0)) throw invalid_input_error("delta_h_sq: theta must be positive");
  if (!(hurst > 0.0 && hurst < 0.75))
    throw invalid_input_error("delta_h_sq: hurst must lie in (0, 3/4)");
  const double lead = theta / (4.0 * hurst * hurst);
  if (hurst < 0.5) {
    double ratio = std::exp(std::lgamma(2.0 - 4.0 * hurst) + std::lgamma(4.0 * hurst) -
                            std::lgamma(2.0 * hurst) - std::lgamma(1.0 - 2.0 * hurst));
    return lead * ((4.0 * hurst - 1.0) + 2.0 * ratio);
  }
  double ratio = std::exp(std::lgamma(3.0 - 4.0 * hurst) + std::lgamma(4.0 * hurst - 1.0) -
                          std::lgamma(2.0 - 2.0 * hurst) - std::lgamma(2.0 * hurst));
  return lead * (4.0 * hurst - 1.0) * (1.0 + ratio);
}

double ou1_rate_bound(double hurst, double T) {
  require_horizon(T);
  if (!(hurst > 0.0 && hurst < 0.75))
    throw invalid_input_error("ou1_rate_bound: hurst must lie in (0, 3/4)");
  if (hurst <= 0.625) return 1.0 / std::sqrt(T);
  return std::pow(T, 4.0 * hurst - 3.0);
}

double ou1_rate_bound_discrete(double hurst, std::size_t n, double delta) {
  if (n < 1) throw invalid_input_error("ou1_rate_bound_discrete: n must be >= 1");
  if (!(delta > 0.0)) throw invalid_input_error("ou1_rate_bound_discrete: delta must be positive");
  if (!(hurst > 0.0 && hurst < 0.75))
    throw invalid_input_error("ou1_rate_bound_discrete: hurst must lie in (0, 3/4)");
  double mesh = std::sqrt(static_cast<double>(n) * std::pow(delta, 2.0 * hurst + 1.0));
  return mesh + ou1_rate_bound(hurst, static_cast<double>(n) * delta);
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["kernel"] = kernel;
  j["T"] = T;
  j["kappa3_bound"] = kappa3;
  j["kappa4_bound"] = kappa4;
  j["phi_T"] = phi;
  j["var_VT"] = var_vt_value;
  j["sigma_z_sq"] = sigma_z_sq_value;
  j["sigma_correction"] = sigma_correction_value;
  auto put = [&j](const char* key, const auto& opt) {
    if (opt)
      j[key] = *opt;
    else
      j[key] = nullptr;
  };
  put("n", n);
  put("delta", delta);
  put("discrete_penalty", discrete_penalty);
  put("var_UN", var_un_value);
  put("variance_ratio_term", variance_ratio_term);
  put("tilde_total", tilde_total);
  put("gamma", gamma);
  put("nonstat_penalty", nonstat_penalty);
  auto put_rate = [&j](const char* key, const std::optional<RateExponent>& opt) {
    if (opt)
      j[key] = {{"exponent", opt->exponent}, {"log_power", opt->log_power}};
    else
      j[key] = nullptr;
  };
  put_rate("rate_tv_hat", rate_tv_hat);
  put_rate("rate_sigma_normalized", rate_sigma_normalized);
  return j;
}

BoundReport make_bound_report(const Kernel& kernel, double T,
                              std::optional<std::pair<std::size_t, double>> discrete,
                              std::optional<double> gamma) {
  require_horizon(T);
  BoundReport r;
  r.kernel = kernel.describe();
  r.T = T;
  PhiBound phi = phi_bound(kernel, T);
  r.kappa3 = phi.kappa3_term;
  r.kappa4 = phi.kappa4_term;
  r.phi = phi.value();
  r.var_vt_value = var_vt(kernel, T);
  r.sigma_z_sq_value = sigma_z_sq(kernel);
  r.sigma_correction_value = 2.0 * std::fabs(1.0 - r.sigma_z_sq_value / r.var_vt_value);
  if (discrete) {
    auto [n, delta] = *discrete;
    if (std::fabs(static_cast<double>(n) * delta - T) > 1e-9 * std::max(1.0, T))
      throw invalid_input_error("bound report: discrete design must satisfy n * delta == T");
    r.n = n;
    r.delta = delta;
    r.discrete_penalty = discretization_penalty(n, delta, kernel.alpha());
    r.var_un_value = var_un_discrete(kernel, n, delta);
    r.variance_ratio_term = 2.0 * std::fabs(1.0 - r.var_vt_value / *r.var_un_value);
    r.tilde_total = r.phi + *r.variance_ratio_term + *r.discrete_penalty;
  }
  if (gamma) {
    r.gamma = gamma;
    r.nonstat_penalty = std::pow(T, (1.0 - *gamma) / 4.0);
  }
  if (auto beta = kernel.decay_beta(); beta && *beta > 0.0 && *beta < 0.75) {
    r.rate_tv_hat = rate_exponent(*beta, RateTarget::tv_hat);
    r.rate_sigma_normalized = rate_exponent(*beta, RateTarget::sigma_normalized);
  }
  return r;
}

}  // namespace gpsm
