#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "gpsm/path.hpp"

namespace gpsm {

/// Second-moment estimates for one path, plus the scaled deviation
/// statistics when the true moment is known:
///   v_stat = sqrt(T) (f_hat - f_Z),  u_stat = sqrt(T) (f_tilde - f_Z),
///   delta_stat = u_stat - v_stat.
struct EstimateRecord {
  double horizon = 0.0;
  std::size_t samples = 0;  // n (observations past t_0)
  double f_hat = 0.0;
  double f_tilde = 0.0;
  std::optional<double> v_stat, u_stat, delta_stat;
  nlohmann::json to_json() const;
};

/// Trapezoid time average of the squared path over its grid.
double f_hat_continuous(const Path& path);

/// Mean of squares over t_1..t_n (the t_0 sample is excluded).
double f_tilde_discrete(const Path& path);

/// Mean of squares of the given observations.
double f_tilde_discrete(const std::vector<double>& samples);

/// (estimate - center) / sqrt(variance); variance must be positive.
double standardize(double estimate, double center, double variance);

EstimateRecord make_estimate_record(const Path& path, std::optional<double> f_z);

/// Closed-form stationary second moment of the drift-theta fOU of the first
/// kind: theta^(-2H) H Gamma(2H).
double fou1_stationary_moment(double theta, double hurst);

/// Drift from the continuous estimator for the first-kind fOU:
/// theta_hat = (H Gamma(2H) / f)^(1 / 2H).
double drift_fou1(double f_hat, double hurst);

/// Stationary second moment of the second-kind fOU as a function of the
/// drift: (2H-1) H^(2H) / mu * Beta(1 - H + mu H, 2H - 1).  Monotone
/// decreasing in mu.
double g_inverse_fou2(double mu, double hurst);

/// Inverse of g_inverse_fou2 in mu, by bisection with bracket doubling.
double drift_fou2(double f_tilde, double hurst);

/// Moment <-> drift mapping for the two parametric models.
class DriftModel {
 public:
  enum class Kind { fou1, fou2 };

  static DriftModel fou1(double hurst);
  static DriftModel fou2(double hurst);

  double stationary_moment(double drift) const;
  double drift_from_moment(double moment) const;
  Kind kind() const { return kind_; }
  double hurst() const { return hurst_; }

 private:
  DriftModel(Kind kind, double hurst) : kind_(kind), hurst_(hurst) {}
  Kind kind_;
  double hurst_;
};

}  // namespace gpsm
