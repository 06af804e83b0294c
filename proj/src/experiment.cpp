#include "gpsm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "gpsm/bounds.hpp"
#include "gpsm/csvio.hpp"
#include "gpsm/errors.hpp"
#include "gpsm/estimators.hpp"
#include "gpsm/parallel.hpp"
#include "gpsm/sampler.hpp"

namespace gpsm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return kNan;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size() - 1);
}

double sample_mean(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  return mean / static_cast<double>(xs.size());
}

struct Draws {
  std::vector<double> f_hat;
  std::vector<double> f_tilde;
};

Draws simulate_design(const ModelSpec& model, const DesignPoint& point, std::size_t replications,
                      std::uint64_t master_seed, std::uint64_t stream_base, unsigned threads) {
  GridSpec grid = GridSpec::uniform(point.n, point.delta);
  std::function<Path(const SeedSpec&)> draw;
  switch (model.type) {
    case ModelSpec::Type::stationary: {
      auto sampler = std::make_shared<CirculantSampler>(*model.kernel, grid);
      draw = [sampler](const SeedSpec& seed) { return sampler->sample(seed); };
      break;
    }
    case ModelSpec::Type::fou1: {
      auto sampler = std::make_shared<Fou1Sampler>(model.theta, model.hurst, grid);
      draw = [sampler](const SeedSpec& seed) { return sampler->sample(seed); };
      break;
    }
    case ModelSpec::Type::fou2: {
      auto sampler = std::make_shared<Fou2Sampler>(model.mu, model.hurst, grid, model.burn_in);
      draw = [sampler](const SeedSpec& seed) { return sampler->sample(seed); };
      break;
    }
  }
  Draws out;
  out.f_hat.resize(replications);
  out.f_tilde.resize(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    Path path = draw(SeedSpec{master_seed, stream_base + r});
    out.f_hat[r] = f_hat_continuous(path);
    out.f_tilde[r] = f_tilde_discrete(path);
  });
  return out;
}

std::vector<double> standardized(const std::vector<double>& stats, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw numeric_error("standardization variance is not positive");
  std::vector<double> out(stats.size());
  const double s = std::sqrt(variance);
  for (std::size_t i = 0; i < stats.size(); ++i) out[i] = stats[i] / s;
  return out;
}

nlohmann::json rate_fit_json(const std::optional<RateFit>& fit) {
  if (!fit) return nullptr;
  return {{"slope", fit->slope},   {"intercept", fit->intercept}, {"slope_se", fit->slope_se},
          {"ci_low", fit->ci_low}, {"ci_high", fit->ci_high},     {"points", fit->points}};
}

std::optional<RateFit> try_rate_fit(const std::vector<DesignRow>& rows,
                                    double DesignRow::*column) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : rows) {
    double value = row.*column;
    if (std::isnan(value)) return std::nullopt;
    pairs.emplace_back(row.T, value);
  }
  std::sort(pairs.begin(), pairs.end());
  try {
    return loglog_rate_fit(pairs);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

}  // namespace

double ModelSpec::true_moment() const {
  switch (type) {
    case Type::stationary:
      return kernel->variance();
    case Type::fou1:
      return fou1_stationary_moment(theta, hurst);
    case Type::fou2:
      return g_inverse_fou2(mu, hurst);
  }
  throw invalid_input_error("model.type is not set");
}

double ModelSpec::true_drift() const {
  switch (type) {
    case Type::fou1:
      return theta;
    case Type::fou2:
      return mu;
    case Type::stationary:
      break;
  }
  throw invalid_input_error("model has no drift parameter");
}

std::optional<Kernel> ModelSpec::law_kernel() const {
  switch (type) {
    case Type::stationary:
      return kernel;
    case Type::fou1:
      return Kernel::fou1_stationary(theta, hurst);
    case Type::fou2:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  switch (type) {
    case Type::stationary:
      out << "stationary " << kernel->describe();
      break;
    case Type::fou1:
      out << "fou1(theta=" << theta << ", H=" << hurst << ")";
      break;
    case Type::fou2:
      out << "fou2(mu=" << mu << ", H=" << hurst;
      if (burn_in > 0.0) out << ", burn_in=" << burn_in;
      out << ")";
      break;
  }
  return out.str();
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  ModelSpec m;
  try {
    std::string type = j.at("type").get<std::string>();
    if (type == "stationary") {
      m.type = Type::stationary;
      m.kernel = Kernel::from_json(j.at("kernel"));
    } else if (type == "fou1") {
      m.type = Type::fou1;
      m.theta = j.at("theta").get<double>();
      m.hurst = j.at("hurst").get<double>();
    } else if (type == "fou2") {
      m.type = Type::fou2;
      m.mu = j.at("mu").get<double>();
      m.hurst = j.at("hurst").get<double>();
      m.burn_in = j.value("burn_in", 0.0);
    } else {
      throw invalid_input_error("model.type must be stationary, fou1 or fou2");
    }
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input_error(std::string("model: ") + e.what());
  }
  if (m.type == Type::fou1) {
    if (!(m.theta > 0.0)) throw invalid_input_error("model.theta must be positive");
    if (!(m.hurst > 0.0 && m.hurst < 1.0))
      throw invalid_input_error("model.hurst must lie in (0, 1)");
  }
  if (m.type == Type::fou2) {
    if (!(m.mu > 0.0)) throw invalid_input_error("model.mu must be positive");
    if (!(m.hurst > 0.5 && m.hurst < 1.0))
      throw invalid_input_error("model.hurst must lie in (1/2, 1) for fou2");
    if (!(m.burn_in >= 0.0)) throw invalid_input_error("model.burn_in must be nonnegative");
  }
  return m;
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j;
  switch (type) {
    case Type::stationary:
      j["type"] = "stationary";
      j["kernel"] = kernel->to_json();
      break;
    case Type::fou1:
      j["type"] = "fou1";
      j["theta"] = theta;
      j["hurst"] = hurst;
      break;
    case Type::fou2:
      j["type"] = "fou2";
      j["mu"] = mu;
      j["hurst"] = hurst;
      j["burn_in"] = burn_in;
      break;
  }
  return j;
}

const char* to_string(VarianceSource source) {
  switch (source) {
    case VarianceSource::mc_sample:
      return "mc_sample";
    case VarianceSource::exact:
      return "exact";
    case VarianceSource::limit:
      return "limit";
  }
  return "?";
}

VarianceSource variance_source_from_string(const std::string& name) {
  if (name == "mc_sample") return VarianceSource::mc_sample;
  if (name == "exact") return VarianceSource::exact;
  if (name == "limit") return VarianceSource::limit;
  throw invalid_input_error("variance_source must be mc_sample, exact or limit, got '" + name +
                            "'");
}

StatisticSet StatisticSet::from_json(const nlohmann::json& names) {
  if (!names.is_array()) throw invalid_input_error("statistics must be an array of names");
  StatisticSet s;
  s.kolmogorov = s.wasserstein1 = s.cumulants = s.variance = s.rate_fit = false;
  for (const auto& item : names) {
    std::string name = item.get<std::string>();
    if (name == "kolmogorov")
      s.kolmogorov = true;
    else if (name == "wasserstein1")
      s.wasserstein1 = true;
    else if (name == "cumulants")
      s.cumulants = true;
    else if (name == "variance")
      s.variance = true;
    else if (name == "rate_fit")
      s.rate_fit = true;
    else if (name == "negative_moments")
      s.negative_moments = true;
    else if (name == "drift_error")
      s.drift_error = true;
    else
      throw invalid_input_error("statistics: unknown statistic '" + name + "'");
  }
  return s;
}

nlohmann::json StatisticSet::to_json() const {
  nlohmann::json names = nlohmann::json::array();
  if (kolmogorov) names.push_back("kolmogorov");
  if (wasserstein1) names.push_back("wasserstein1");
  if (cumulants) names.push_back("cumulants");
  if (variance) names.push_back("variance");
  if (rate_fit) names.push_back("rate_fit");
  if (negative_moments) names.push_back("negative_moments");
  if (drift_error) names.push_back("drift_error");
  return names;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.model = ModelSpec::from_json(j.at("model"));
    for (const auto& entry : j.at("design")) {
      DesignPoint p;
      bool has_n = entry.contains("n");
      bool has_delta = entry.contains("delta");
      bool has_T = entry.contains("T");
      if (has_n) p.n = entry.at("n").get<std::size_t>();
      if (has_delta) p.delta = entry.at("delta").get<double>();
      if (has_n && has_delta) {
        if (has_T) {
          double T = entry.at("T").get<double>();
          if (std::fabs(p.horizon() - T) > 1e-9 * std::max(1.0, T))
            throw invalid_input_error("design: n * delta disagrees with T");
        }
      } else if (has_T && has_n) {
        p.delta = entry.at("T").get<double>() / static_cast<double>(p.n);
      } else if (has_T && has_delta) {
        double T = entry.at("T").get<double>();
        p.n = static_cast<std::size_t>(std::llround(T / p.delta));
        if (p.n < 1 || std::fabs(p.horizon() - T) > 1e-9 * std::max(1.0, T))
          throw invalid_input_error("design: T must be an integer multiple of delta");
      } else {
        throw invalid_input_error("design: each entry needs two of n, delta, T");
      }
      c.design.push_back(p);
    }
    c.replications = j.value("replications", std::size_t{100});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.threads = j.value("threads", 1u);
    if (j.contains("variance_source"))
      c.variance_source = variance_source_from_string(j.at("variance_source").get<std::string>());
    if (j.contains("statistics")) c.statistics = StatisticSet::from_json(j.at("statistics"));
    c.probe_order = j.value("probe_order", 2);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input_error(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["model"] = model.to_json();
  j["design"] = nlohmann::json::array();
  for (const auto& p : design)
    j["design"].push_back({{"n", p.n}, {"delta", p.delta}, {"T", p.horizon()}});
  j["replications"] = replications;
  j["master_seed"] = master_seed;
  j["threads"] = threads;
  j["variance_source"] = to_string(variance_source);
  j["statistics"] = statistics.to_json();
  j["probe_order"] = probe_order;
  return j;
}

void ExperimentConfig::validate() const {
  if (model.type == ModelSpec::Type::stationary && !model.kernel)
    throw invalid_input_error("model.kernel is required for stationary models");
  if (design.empty()) throw invalid_input_error("design must contain at least one point");
  for (const auto& p : design) {
    if (p.n < 1) throw invalid_input_error("design.n must be >= 1");
    if (!(p.delta > 0.0)) throw invalid_input_error("design.delta must be positive");
  }
  if (replications < 100) throw invalid_input_error("replications must be >= 100");
  if (replications >= (std::uint64_t{1} << 32))
    throw invalid_input_error("replications must fit in 32 bits");
  if (design.size() >= (std::size_t{1} << 31))
    throw invalid_input_error("too many design points");
  if (threads < 1 || threads > 256)
    throw invalid_input_error("threads must lie in [1, 256]");
  if (model.type == ModelSpec::Type::fou2 && variance_source != VarianceSource::mc_sample)
    throw invalid_input_error(
        "variance_source must be mc_sample for the fou2 model (no closed-form variance)");
  if (statistics.drift_error && model.type == ModelSpec::Type::stationary)
    throw invalid_input_error("drift_error requires a fou1 or fou2 model");
  if (statistics.negative_moments && probe_order != 1 && probe_order != 2)
    throw invalid_input_error("probe_order must be 1 or 2");
}

DesignRow::DesignRow()
    : var_v_mc(kNan), var_u_mc(kNan), var_v_used(kNan), var_u_used(kNan), dk_v(kNan), dw1_v(kNan),
      dk_u(kNan), dw1_u(kNan), skew_v(kNan), skew_se_v(kNan), exkurt_v(kNan), exkurt_se_v(kNan),
      skew_u(kNan), skew_se_u(kNan), exkurt_u(kNan), exkurt_se_u(kNan), kappa3_bound_value(kNan),
      kappa4_bound_value(kNan), phi_value(kNan), sigma_correction_value(kNan),
      discrete_penalty_value(kNan), variance_ratio_value(kNan), tilde_total_value(kNan),
      ou1_bound_value(kNan), delta_h_sq_value(kNan), drift_true(kNan), drift_mean(kNan),
      drift_bias(kNan), drift_rmse(kNan), drift_scaled_var(kNan), drift_anomalies(kNan),
      neg_mean_inv_hat(kNan), neg_mean_inv_tilde(kNan), neg_nonpositive(kNan) {}

nlohmann::json DesignRow::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["delta"] = delta;
  j["T"] = T;
  j["f_z"] = f_z;
  j["f_hat_mean"] = f_hat_mean;
  j["f_tilde_mean"] = f_tilde_mean;
  auto put = [&j](const char* key, double value) {
    if (std::isnan(value))
      j[key] = nullptr;
    else
      j[key] = value;
  };
  put("var_v_mc", var_v_mc);
  put("var_u_mc", var_u_mc);
  put("var_v_used", var_v_used);
  put("var_u_used", var_u_used);
  put("dk_v", dk_v);
  put("dw1_v", dw1_v);
  put("dk_u", dk_u);
  put("dw1_u", dw1_u);
  put("skew_v", skew_v);
  put("skew_se_v", skew_se_v);
  put("exkurt_v", exkurt_v);
  put("exkurt_se_v", exkurt_se_v);
  put("skew_u", skew_u);
  put("skew_se_u", skew_se_u);
  put("exkurt_u", exkurt_u);
  put("exkurt_se_u", exkurt_se_u);
  put("kappa3_bound", kappa3_bound_value);
  put("kappa4_bound", kappa4_bound_value);
  put("phi_T", phi_value);
  put("sigma_correction", sigma_correction_value);
  put("discrete_penalty", discrete_penalty_value);
  put("variance_ratio_term", variance_ratio_value);
  put("tilde_total", tilde_total_value);
  put("ou1_rate_bound", ou1_bound_value);
  put("delta_h_sq", delta_h_sq_value);
  put("drift_true", drift_true);
  put("drift_mean", drift_mean);
  put("drift_bias", drift_bias);
  put("drift_rmse", drift_rmse);
  put("drift_scaled_var", drift_scaled_var);
  put("drift_anomalies", drift_anomalies);
  put("neg_mean_inv_hat", neg_mean_inv_hat);
  put("neg_mean_inv_tilde", neg_mean_inv_tilde);
  put("neg_nonpositive", neg_nonpositive);
  return j;
}

const char* distance_proxy_note() {
  return "d_K and d_W1 are the empirical Kolmogorov and quantile-coupling Wasserstein-1 "
         "distances between the standardized replications and the standard normal; they are "
         "finite-sample proxies for the total-variation and Wasserstein distances that the "
         "theoretical bounds control, and approach them as replications grow.";
}

namespace {

const char* kCsvColumns =
    "n,delta,T,f_z,f_hat_mean,f_tilde_mean,var_v_mc,var_u_mc,var_v_used,var_u_used,"
    "dk_v,dw1_v,dk_u,dw1_u,skew_v,skew_se_v,exkurt_v,exkurt_se_v,skew_u,skew_se_u,"
    "exkurt_u,exkurt_se_u,kappa3_bound,kappa4_bound,phi_T,sigma_correction,"
    "discrete_penalty,variance_ratio_term,tilde_total,ou1_rate_bound,delta_h_sq,"
    "drift_true,drift_mean,drift_bias,drift_rmse,drift_scaled_var,drift_anomalies,"
    "neg_mean_inv_hat,neg_mean_inv_tilde,neg_nonpositive";

}  // namespace

std::string ExperimentReport::csv() const {
  std::ostringstream out;
  out << "# second-moment limit experiment\n";
  out << "# model: " << config.model.describe() << "\n";
  out << "# " << distance_proxy_note() << "\n";
  out << "# replications: " << config.replications << "; master_seed: " << config.master_seed
      << "; variance_source: " << to_string(config.variance_source) << "\n";
  out << kCsvColumns << "\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.delta) << ',' << format_double(r.T) << ','
        << format_double(r.f_z) << ',' << format_double(r.f_hat_mean) << ','
        << format_double(r.f_tilde_mean) << ',' << cell(r.var_v_mc) << ',' << cell(r.var_u_mc)
        << ',' << cell(r.var_v_used) << ',' << cell(r.var_u_used) << ',' << cell(r.dk_v) << ','
        << cell(r.dw1_v) << ',' << cell(r.dk_u) << ',' << cell(r.dw1_u) << ',' << cell(r.skew_v)
        << ',' << cell(r.skew_se_v) << ',' << cell(r.exkurt_v) << ',' << cell(r.exkurt_se_v)
        << ',' << cell(r.skew_u) << ',' << cell(r.skew_se_u) << ',' << cell(r.exkurt_u) << ','
        << cell(r.exkurt_se_u) << ',' << cell(r.kappa3_bound_value) << ','
        << cell(r.kappa4_bound_value) << ',' << cell(r.phi_value) << ','
        << cell(r.sigma_correction_value) << ',' << cell(r.discrete_penalty_value) << ','
        << cell(r.variance_ratio_value) << ',' << cell(r.tilde_total_value) << ','
        << cell(r.ou1_bound_value) << ',' << cell(r.delta_h_sq_value) << ','
        << cell(r.drift_true) << ',' << cell(r.drift_mean) << ',' << cell(r.drift_bias) << ','
        << cell(r.drift_rmse) << ',' << cell(r.drift_scaled_var) << ','
        << cell(r.drift_anomalies) << ',' << cell(r.neg_mean_inv_hat) << ','
        << cell(r.neg_mean_inv_tilde) << ',' << cell(r.neg_nonpositive) << '\n';
  }
  auto footer = [&out](const char* name, const std::optional<RateFit>& fit) {
    if (!fit) return;
    out << "# rate_fit " << name << ": slope=" << format_double(fit->slope)
        << " ci95=[" << format_double(fit->ci_low) << "," << format_double(fit->ci_high)
        << "] points=" << fit->points << "\n";
  };
  footer("dk_v", rate_dk_v);
  footer("dw1_v", rate_dw1_v);
  footer("dk_u", rate_dk_u);
  footer("dw1_u", rate_dw1_u);
  return out.str();
}

nlohmann::json ExperimentReport::sidecar_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["distance_proxy_note"] = distance_proxy_note();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back(r.to_json());
  j["rate_fits"] = {{"dk_v", rate_fit_json(rate_dk_v)},
                    {"dw1_v", rate_fit_json(rate_dw1_v)},
                    {"dk_u", rate_fit_json(rate_dk_u)},
                    {"dw1_u", rate_fit_json(rate_dw1_u)}};
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  const double f_z = config.model.true_moment();
  const std::optional<Kernel> kernel = config.model.law_kernel();
  const StatisticSet& stats = config.statistics;

  for (std::size_t d = 0; d < config.design.size(); ++d) {
    const DesignPoint& point = config.design[d];
    const double T = point.horizon();
    Draws draws = simulate_design(config.model, point, config.replications, config.master_seed,
                                  static_cast<std::uint64_t>(d) << 32, config.threads);

    DesignRow row;
    row.n = point.n;
    row.delta = point.delta;
    row.T = T;
    row.f_z = f_z;
    row.f_hat_mean = sample_mean(draws.f_hat);
    row.f_tilde_mean = sample_mean(draws.f_tilde);

    std::vector<double> v(config.replications), u(config.replications);
    const double root_t = std::sqrt(T);
    for (std::size_t r = 0; r < config.replications; ++r) {
      v[r] = root_t * (draws.f_hat[r] - f_z);
      u[r] = root_t * (draws.f_tilde[r] - f_z);
    }
    const double var_v = sample_variance(v);
    const double var_u = sample_variance(u);
    if (stats.variance) {
      row.var_v_mc = var_v;
      row.var_u_mc = var_u;
    }

    double var_v_used = var_v, var_u_used = var_u;
    if (config.variance_source == VarianceSource::exact) {
      var_v_used = var_vt(*kernel, T);
      var_u_used = var_un_discrete(*kernel, point.n, point.delta);
    } else if (config.variance_source == VarianceSource::limit) {
      var_v_used = sigma_z_sq(*kernel);
      var_u_used = var_v_used;
    }
    row.var_v_used = var_v_used;
    row.var_u_used = var_u_used;

    std::vector<double> z_v = standardized(v, var_v_used);
    std::vector<double> z_u = standardized(u, var_u_used);
    if (stats.kolmogorov) {
      row.dk_v = kolmogorov_distance(z_v);
      row.dk_u = kolmogorov_distance(z_u);
    }
    if (stats.wasserstein1) {
      row.dw1_v = wasserstein1_distance(z_v);
      row.dw1_u = wasserstein1_distance(z_u);
    }
    if (stats.cumulants) {
      Cumulants cv = empirical_cumulants(z_v);
      row.skew_v = cv.skewness;
      row.skew_se_v = cv.skewness_se;
      row.exkurt_v = cv.excess_kurtosis;
      row.exkurt_se_v = cv.excess_kurtosis_se;
      Cumulants cu = empirical_cumulants(z_u);
      row.skew_u = cu.skewness;
      row.skew_se_u = cu.skewness_se;
      row.exkurt_u = cu.excess_kurtosis;
      row.exkurt_se_u = cu.excess_kurtosis_se;
    }

    if (kernel) {
      try {
        row.kappa3_bound_value = kappa3_bound(*kernel, T);
        row.kappa4_bound_value = kappa4_bound(*kernel, T);
        row.phi_value = std::max(row.kappa3_bound_value, row.kappa4_bound_value);
        row.discrete_penalty_value = discretization_penalty(point.n, point.delta, kernel->alpha());
        double vc = var_vt(*kernel, T);
        double vd = var_un_discrete(*kernel, point.n, point.delta);
        row.variance_ratio_value = 2.0 * std::fabs(1.0 - vc / vd);
        row.tilde_total_value =
            row.phi_value + row.variance_ratio_value + row.discrete_penalty_value;
        row.sigma_correction_value = 2.0 * std::fabs(1.0 - sigma_z_sq(*kernel) / vc);
      } catch (const std::exception&) {
        // Kernels outside the square-integrable range keep NaN columns.
      }
    }
    if (config.model.type == ModelSpec::Type::fou1 && config.model.hurst < 0.75) {
      row.ou1_bound_value = ou1_rate_bound_discrete(config.model.hurst, point.n, point.delta);
      row.delta_h_sq_value = delta_h_sq(config.model.hurst, config.model.theta);
    }

    if (stats.drift_error) {
      const double truth = config.model.true_drift();
      std::vector<double> scaled;
      scaled.reserve(config.replications);
      double sum = 0.0, sq = 0.0;
      std::size_t bad = 0;
      for (std::size_t r = 0; r < config.replications; ++r) {
        double moment = config.model.type == ModelSpec::Type::fou1 ? draws.f_hat[r]
                                                                   : draws.f_tilde[r];
        if (!(moment > 0.0)) {
          ++bad;
          continue;
        }
        double est = config.model.type == ModelSpec::Type::fou1
                         ? drift_fou1(moment, config.model.hurst)
                         : drift_fou2(moment, config.model.hurst);
        sum += est;
        sq += (est - truth) * (est - truth);
        scaled.push_back(root_t * (est - truth));
      }
      row.drift_true = truth;
      row.drift_anomalies = static_cast<double>(bad);
      if (!scaled.empty()) {
        row.drift_mean = sum / static_cast<double>(scaled.size());
        row.drift_bias = row.drift_mean - truth;
        row.drift_rmse = std::sqrt(sq / static_cast<double>(scaled.size()));
        row.drift_scaled_var = sample_variance(scaled);
      }
    }

    if (stats.negative_moments) {
      const double p = static_cast<double>(config.probe_order);
      double acc_hat = 0.0, acc_tilde = 0.0;
      std::size_t ok_hat = 0, ok_tilde = 0, bad = 0;
      for (std::size_t r = 0; r < config.replications; ++r) {
        bool hat_ok = draws.f_hat[r] > 0.0;
        bool tilde_ok = draws.f_tilde[r] > 0.0;
        if (!hat_ok || !tilde_ok) ++bad;
        if (hat_ok) {
          acc_hat += std::pow(draws.f_hat[r], -p);
          ++ok_hat;
        }
        if (tilde_ok) {
          acc_tilde += std::pow(draws.f_tilde[r], -p);
          ++ok_tilde;
        }
      }
      row.neg_nonpositive = static_cast<double>(bad);
      if (ok_hat > 0) row.neg_mean_inv_hat = acc_hat / static_cast<double>(ok_hat);
      if (ok_tilde > 0) row.neg_mean_inv_tilde = acc_tilde / static_cast<double>(ok_tilde);
    }

    report.rows.push_back(row);
  }

  if (stats.rate_fit && report.rows.size() >= 3) {
    report.rate_dk_v = try_rate_fit(report.rows, &DesignRow::dk_v);
    report.rate_dw1_v = try_rate_fit(report.rows, &DesignRow::dw1_v);
    report.rate_dk_u = try_rate_fit(report.rows, &DesignRow::dk_u);
    report.rate_dw1_u = try_rate_fit(report.rows, &DesignRow::dw1_u);
  }
  return report;
}

std::string ProbeReport::csv() const {
  std::ostringstream out;
  out << "# negative-moment probe: E[f^-p] for the continuous and discrete estimators\n";
  out << "# p: " << p << "; replications: " << replications << "; master_seed: " << master_seed
      << "\n";
  out << "n,delta,T,mean_inv_hat,mean_inv_tilde,nonpositive\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.delta) << ',' << format_double(r.T) << ','
        << format_double(r.mean_inv_hat) << ',' << format_double(r.mean_inv_tilde) << ','
        << r.nonpositive << '\n';
  out << "# ratio_hat=" << format_double(ratio_hat)
      << " ratio_tilde=" << format_double(ratio_tilde)
      << " total_nonpositive=" << total_nonpositive << "\n";
  return out.str();
}

nlohmann::json ProbeReport::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["replications"] = replications;
  j["master_seed"] = master_seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"n", r.n},
                         {"delta", r.delta},
                         {"T", r.T},
                         {"mean_inv_hat", r.mean_inv_hat},
                         {"mean_inv_tilde", r.mean_inv_tilde},
                         {"nonpositive", r.nonpositive}});
  j["ratio_hat"] = ratio_hat;
  j["ratio_tilde"] = ratio_tilde;
  j["total_nonpositive"] = total_nonpositive;
  return j;
}

ProbeReport negative_moment_probe(const ModelSpec& model, int p,
                                  const std::vector<DesignPoint>& grid,
                                  std::size_t replications, std::uint64_t master_seed,
                                  unsigned threads) {
  if (p != 1 && p != 2) throw invalid_input_error("negative_moment_probe: p must be 1 or 2");
  if (replications < 1000)
    throw invalid_input_error("negative_moment_probe: needs at least 1000 replications");
  if (grid.empty()) throw invalid_input_error("negative_moment_probe: empty horizon grid");
  if (model.type == ModelSpec::Type::stationary && !model.kernel)
    throw invalid_input_error("negative_moment_probe: stationary model needs a kernel");

  ProbeReport report;
  report.p = p;
  report.replications = replications;
  report.master_seed = master_seed;
  const double pw = static_cast<double>(p);
  for (std::size_t d = 0; d < grid.size(); ++d) {
    const DesignPoint& point = grid[d];
    if (point.n < 1 || !(point.delta > 0.0))
      throw invalid_input_error("negative_moment_probe: bad design point");
    Draws draws = simulate_design(model, point, replications, master_seed,
                                  static_cast<std::uint64_t>(d) << 32, threads);
    ProbeRow row;
    row.n = point.n;
    row.delta = point.delta;
    row.T = point.horizon();
    double acc_hat = 0.0, acc_tilde = 0.0;
    std::size_t ok_hat = 0, ok_tilde = 0;
    for (std::size_t r = 0; r < replications; ++r) {
      if (draws.f_hat[r] > 0.0) {
        acc_hat += std::pow(draws.f_hat[r], -pw);
        ++ok_hat;
      }
      if (draws.f_tilde[r] > 0.0) {
        acc_tilde += std::pow(draws.f_tilde[r], -pw);
        ++ok_tilde;
      }
      if (!(draws.f_hat[r] > 0.0) || !(draws.f_tilde[r] > 0.0)) ++row.nonpositive;
    }
    row.mean_inv_hat = ok_hat ? acc_hat / static_cast<double>(ok_hat) : kNan;
    row.mean_inv_tilde = ok_tilde ? acc_tilde / static_cast<double>(ok_tilde) : kNan;
    report.total_nonpositive += row.nonpositive;
    report.rows.push_back(row);
  }
  auto ratio = [&](double ProbeRow::*member) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : report.rows) {
      double x = r.*member;
      if (std::isnan(x)) return kNan;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return lo > 0.0 ? hi / lo : kNan;
  };
  report.ratio_hat = ratio(&ProbeRow::mean_inv_hat);
  report.ratio_tilde = ratio(&ProbeRow::mean_inv_tilde);
  return report;
}

}  // namespace gpsm
