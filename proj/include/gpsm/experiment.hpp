#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpsm/kernels.hpp"
#include "gpsm/stats.hpp"

namespace gpsm {

/// Data-generating process for a Monte Carlo run: a stationary Gaussian law
/// given by its autocovariance, or one of the two fractional OU drift models.
struct ModelSpec {
  enum class Type { stationary, fou1, fou2 };
  Type type = Type::stationary;
  std::optional<Kernel> kernel;  // stationary only
  double theta = 1.0;            // fou1 drift
  double mu = 1.0;               // fou2 drift
  double hurst = 0.5;            // fou1 (0,1), fou2 (1/2,1)
  double burn_in = 0.0;          // fou2: time discarded before t_0

  /// E[Z_t^2] under the model (the estimand).
  double true_moment() const;
  /// True drift parameter for the fOU models.
  double true_drift() const;
  /// Stationary autocovariance when one exists in closed form.
  std::optional<Kernel> law_kernel() const;
  std::string describe() const;

  static ModelSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Variance used to standardize sqrt(T) (estimate - truth): the Monte Carlo
/// sample variance, the exact finite-T variance, or the limit variance.
enum class VarianceSource { mc_sample, exact, limit };
const char* to_string(VarianceSource source);
VarianceSource variance_source_from_string(const std::string& name);

struct DesignPoint {
  std::size_t n = 0;
  double delta = 0.0;
  double horizon() const { return static_cast<double>(n) * delta; }
};

struct StatisticSet {
  bool kolmogorov = true;
  bool wasserstein1 = true;
  bool cumulants = true;
  bool variance = true;
  bool rate_fit = true;
  bool negative_moments = false;
  bool drift_error = false;

  static StatisticSet from_json(const nlohmann::json& names);
  nlohmann::json to_json() const;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<DesignPoint> design;
  std::size_t replications = 100;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  VarianceSource variance_source = VarianceSource::exact;
  StatisticSet statistics;
  int probe_order = 2;  // p for the negative-moment columns

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

/// One design point worth of Monte Carlo summaries.  NaN marks a column that
/// was disabled or does not apply to the model; the CSV writer renders those
/// as empty cells.
struct DesignRow {
  std::size_t n = 0;
  double delta = 0.0;
  double T = 0.0;
  double f_z = 0.0;
  double f_hat_mean = 0.0;
  double f_tilde_mean = 0.0;
  double var_v_mc, var_u_mc, var_v_used, var_u_used;
  double dk_v, dw1_v, dk_u, dw1_u;
  double skew_v, skew_se_v, exkurt_v, exkurt_se_v;
  double skew_u, skew_se_u, exkurt_u, exkurt_se_u;
  double kappa3_bound_value, kappa4_bound_value, phi_value, sigma_correction_value;
  double discrete_penalty_value, variance_ratio_value, tilde_total_value;
  double ou1_bound_value, delta_h_sq_value;
  double drift_true, drift_mean, drift_bias, drift_rmse, drift_scaled_var;
  double drift_anomalies;
  double neg_mean_inv_hat, neg_mean_inv_tilde, neg_nonpositive;

  DesignRow();
  nlohmann::json to_json() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<DesignRow> rows;
  std::optional<RateFit> rate_dk_v, rate_dw1_v, rate_dk_u, rate_dw1_u;

  /// Fixed-width CSV: a '#' header block (including the distance-proxy
  /// statement), one column-name row, one data row per design point.
  std::string csv() const;
  /// Machine-readable companion without timestamps; callers may attach a
  /// "metadata" object of their own.
  nlohmann::json sidecar_json() const;
};

/// Text placed at the top of every report explaining what the distance
/// columns are proxies for.
const char* distance_proxy_note();

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Stress probe for the moments of 1/f_hat and 1/f_tilde (p = 1 or 2) across
/// a horizon grid, with a count of nonpositive estimates.
struct ProbeRow {
  std::size_t n = 0;
  double delta = 0.0;
  double T = 0.0;
  double mean_inv_hat = 0.0;
  double mean_inv_tilde = 0.0;
  std::size_t nonpositive = 0;
};

struct ProbeReport {
  int p = 2;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  std::vector<ProbeRow> rows;
  double ratio_hat = 0.0;    // max/min of mean_inv_hat across rows
  double ratio_tilde = 0.0;
  std::size_t total_nonpositive = 0;

  std::string csv() const;
  nlohmann::json to_json() const;
};

ProbeReport negative_moment_probe(const ModelSpec& model, int p,
                                  const std::vector<DesignPoint>& grid,
                                  std::size_t replications, std::uint64_t master_seed,
                                  unsigned threads = 1);

}  // namespace gpsm
