#include "gpsm/estimators.hpp"

#include <cmath>

#include "gpsm/errors.hpp"
#include "gpsm/mathutil.hpp"

namespace gpsm {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw invalid_input_error(msg);
}

void check_path(const Path& path) {
  require(path.values.size() == path.grid.point_count(),
          "estimator: path length does not match its grid");
  require(path.values.size() >= 2, "estimator: need at least two observations");
}

}  // namespace

nlohmann::json EstimateRecord::to_json() const {
  nlohmann::json j{{"T", horizon},
                   {"n", samples},
                   {"f_hat", f_hat},
                   {"f_tilde", f_tilde}};
  j["v_stat"] = v_stat ? nlohmann::json(*v_stat) : nlohmann::json();
  j["u_stat"] = u_stat ? nlohmann::json(*u_stat) : nlohmann::json();
  j["delta_stat"] = delta_stat ? nlohmann::json(*delta_stat) : nlohmann::json();
  return j;
}

double f_hat_continuous(const Path& path) {
  check_path(path);
  const double span = path.grid.horizon();
  require(span > 0.0, "f_hat: grid must span positive time");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
    const double dt = path.grid.time(i + 1) - path.grid.time(i);
    const double a = path.values[i] * path.values[i];
    const double b = path.values[i + 1] * path.values[i + 1];
    acc += 0.5 * dt * (a + b);
  }
  return acc / span;
}

double f_tilde_discrete(const Path& path) {
  check_path(path);
  double acc = 0.0;
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    acc += path.values[i] * path.values[i];
  }
  return acc / static_cast<double>(path.values.size() - 1);
}

double f_tilde_discrete(const std::vector<double>& samples) {
  require(!samples.empty(), "f_tilde: need at least one observation");
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / static_cast<double>(samples.size());
}

double standardize(double estimate, double center, double variance) {
  require(std::isfinite(variance) && variance > 0.0, "standardize: variance must be positive");
  return (estimate - center) / std::sqrt(variance);
}

EstimateRecord make_estimate_record(const Path& path, std::optional<double> f_z) {
  EstimateRecord rec;
  rec.horizon = path.grid.horizon();
  rec.samples = path.values.size() - 1;
  rec.f_hat = f_hat_continuous(path);
  rec.f_tilde = f_tilde_discrete(path);
  if (f_z) {
    const double root_t = std::sqrt(rec.horizon);
    rec.v_stat = root_t * (rec.f_hat - *f_z);
    rec.u_stat = root_t * (rec.f_tilde - *f_z);
    rec.delta_stat = *rec.u_stat - *rec.v_stat;
  }
  return rec;
}

double fou1_stationary_moment(double theta, double hurst) {
  require(std::isfinite(theta) && theta > 0.0, "fou1 moment: theta must be positive");
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          "fou1 moment: hurst must lie in (0, 1)");
  return std::exp(-2.0 * hurst * std::log(theta) + std::log(hurst) +
                  std::lgamma(2.0 * hurst));
}

double drift_fou1(double f_hat, double hurst) {
  require(std::isfinite(f_hat) && f_hat > 0.0, "drift_fou1: moment estimate must be positive");
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          "drift_fou1: hurst must lie in (0, 1)");
  const double log_moment = std::log(hurst) + std::lgamma(2.0 * hurst);
  return std::exp((log_moment - std::log(f_hat)) / (2.0 * hurst));
}

namespace {

double log_g_inverse_fou2(double mu, double hurst) {
  const double h = hurst;
  return std::log(2.0 * h - 1.0) + 2.0 * h * std::log(h) - std::log(mu) +
         log_beta(1.0 - h + mu * h, 2.0 * h - 1.0);
}

}  // namespace

double g_inverse_fou2(double mu, double hurst) {
  require(std::isfinite(mu) && mu > 0.0, "g_inverse_fou2: mu must be positive");
  require(std::isfinite(hurst) && hurst > 0.5 && hurst < 1.0,
          "g_inverse_fou2: hurst must lie in (1/2, 1)");
  return std::exp(log_g_inverse_fou2(mu, hurst));
}

double drift_fou2(double f_tilde, double hurst) {
  require(std::isfinite(f_tilde) && f_tilde > 0.0,
          "drift_fou2: moment estimate must be positive");
  require(std::isfinite(hurst) && hurst > 0.5 && hurst < 1.0,
          "drift_fou2: hurst must lie in (1/2, 1)");
  const double target = std::log(f_tilde);

  // log g_inverse is strictly decreasing in mu, so bracket by doubling.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (log_g_inverse_fou2(lo, hurst) < target) {
    lo *= 0.5;
    if (++guard > 1200) throw numeric_error("drift_fou2: bracketing failed (moment too large)");
  }
  guard = 0;
  while (log_g_inverse_fou2(hi, hurst) > target) {
    hi *= 2.0;
    if (++guard > 1200) throw numeric_error("drift_fou2: bracketing failed (moment too small)");
  }
  while (hi - lo > 1e-12 + 1e-11 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (log_g_inverse_fou2(mid, hurst) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DriftModel DriftModel::fou1(double hurst) {
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          "drift model: hurst must lie in (0, 1)");
  return DriftModel(Kind::fou1, hurst);
}

DriftModel DriftModel::fou2(double hurst) {
  require(std::isfinite(hurst) && hurst > 0.5 && hurst < 1.0,
          "drift model: hurst must lie in (1/2, 1)");
  return DriftModel(Kind::fou2, hurst);
}

double DriftModel::stationary_moment(double drift) const {
  return kind_ == Kind::fou1 ? fou1_stationary_moment(drift, hurst_)
                             : g_inverse_fou2(drift, hurst_);
}

double DriftModel::drift_from_moment(double moment) const {
  return kind_ == Kind::fou1 ? drift_fou1(moment, hurst_) : drift_fou2(moment, hurst_);
}

}  // namespace gpsm
