// Command-line front end: simulate paths, run the moment estimators, print
// bound tables, drive Monte Carlo experiments, and tabulate predicted rates.
//
// Exit codes: 0 success, 1 invalid input, 2 numeric failure, 3 I/O failure.
// GPSM_OUT_DIR sets the directory used for default output paths.

#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpsm/bounds.hpp"
#include "gpsm/csvio.hpp"
#include "gpsm/errors.hpp"
#include "gpsm/estimators.hpp"
#include "gpsm/experiment.hpp"
#include "gpsm/kernels.hpp"
#include "gpsm/sampler.hpp"

namespace {

using nlohmann::json;

std::string out_dir() {
  const char* env = std::getenv("GPSM_OUT_DIR");
  return (env && *env) ? std::string(env) : std::string(".");
}

std::string join_out(const std::string& name) {
  std::string dir = out_dir();
  if (!dir.empty() && dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

json parse_json_file(const std::string& path) {
  std::string text = gpsm::read_text_file(path);  // io_error names the path
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw gpsm::invalid_input_error(path + ": " + e.what());
  }
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::string config_path;
  std::string out_path;
  std::string out_json_path;
  std::string path_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replication;
  std::optional<unsigned> threads;
  bool quiet = false;
  bool run_simulate = false;
  bool run_estimate = false;
  bool run_bounds = false;
  bool run_experiment = false;
  bool run_rates = false;
};

void note(const Options& opt, const std::string& message) {
  if (!opt.quiet) std::cout << message << "\n";
}

void emit(const Options& opt, const std::string& default_name, const std::string& contents) {
  if (opt.out_path == "-") {
    std::cout << contents;
    return;
  }
  std::string target = opt.out_path.empty() ? join_out(default_name) : opt.out_path;
  gpsm::write_text_file(target, contents);
  note(opt, "wrote " + target);
}

gpsm::GridSpec grid_from_json(const json& j) {
  try {
    if (j.contains("times")) return gpsm::GridSpec::at_times(j.at("times").get<std::vector<double>>());
    std::size_t n = j.at("n").get<std::size_t>();
    double delta = j.at("delta").get<double>();
    return gpsm::GridSpec::uniform(n, delta);
  } catch (const json::exception& e) {
    throw gpsm::invalid_input_error(std::string("grid: ") + e.what());
  }
}

int cmd_simulate(const Options& opt) {
  json config = parse_json_file(opt.config_path);
  gpsm::GridSpec grid = grid_from_json(config.at("grid"));
  std::uint64_t master = config.value("master_seed", std::uint64_t{1});
  std::uint64_t replication = config.value("replication", std::uint64_t{0});
  if (opt.seed) master = *opt.seed;
  if (opt.replication) replication = *opt.replication;
  gpsm::SeedSpec seed{master, replication};

  const json& mj = config.at("model");
  std::string type;
  try {
    type = mj.at("type").get<std::string>();
  } catch (const json::exception& e) {
    throw gpsm::invalid_input_error(std::string("model: ") + e.what());
  }
  gpsm::Path path = [&]() {
    if (type == "fbm") {
      double hurst = 0.0;
      try {
        hurst = mj.at("hurst").get<double>();
      } catch (const json::exception& e) {
        throw gpsm::invalid_input_error(std::string("model: ") + e.what());
      }
      return gpsm::sample_fbm(hurst, grid, seed);
    }
    gpsm::ModelSpec model = gpsm::ModelSpec::from_json(mj);
    switch (model.type) {
      case gpsm::ModelSpec::Type::stationary:
        if (!grid.is_uniform()) {
          Eigen::MatrixXd cov = gpsm::stationary_covariance(*model.kernel, grid);
          Eigen::VectorXd draw = gpsm::sample_gaussian_cholesky(cov, seed);
          std::vector<double> values(draw.data(), draw.data() + draw.size());
          return gpsm::Path{grid, std::move(values), gpsm::PathKind::stationary, seed};
        }
        return gpsm::sample_stationary_uniform(*model.kernel, grid, seed);
      case gpsm::ModelSpec::Type::fou1:
        return gpsm::build_fou1_path(model.theta, model.hurst, grid, seed);
      case gpsm::ModelSpec::Type::fou2:
      default:
        return gpsm::build_fou2_path(model.mu, model.hurst, grid, seed, model.burn_in);
    }
  }();

  std::ostringstream csv;
  csv << "t,value\n";
  for (std::size_t i = 0; i < path.values.size(); ++i)
    csv << gpsm::format_double(path.grid.time(i)) << ','
        << gpsm::format_double(path.values[i]) << '\n';
  Options out_opt = opt;
  emit(out_opt, "simulate_path.csv", csv.str());
  return 0;
}

int cmd_estimate(const Options& opt) {
  gpsm::Path path = gpsm::read_path_csv(opt.path_file);
  std::optional<double> f_z;
  if (!opt.config_path.empty()) {
    json config = parse_json_file(opt.config_path);
    if (config.contains("f_z")) {
      f_z = config.at("f_z").get<double>();
    } else if (config.contains("model")) {
      f_z = gpsm::ModelSpec::from_json(config.at("model")).true_moment();
    }
  }
  gpsm::EstimateRecord record = gpsm::make_estimate_record(path, f_z);
  std::string text = record.to_json().dump(2) + "\n";
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    Options out_opt = opt;
    emit(out_opt, "estimate.json", text);
  }
  return 0;
}

std::string bounds_csv_row(const gpsm::BoundReport& r) {
  auto cell = [](const auto& opt_value) -> std::string {
    if (!opt_value) return "";
    return gpsm::format_double(static_cast<double>(*opt_value));
  };
  std::ostringstream out;
  out << '"' << r.kernel << '"' << ',' << gpsm::format_double(r.T) << ','
      << gpsm::format_double(r.kappa3) << ',' << gpsm::format_double(r.kappa4) << ','
      << gpsm::format_double(r.phi) << ',' << gpsm::format_double(r.var_vt_value) << ','
      << gpsm::format_double(r.sigma_z_sq_value) << ','
      << gpsm::format_double(r.sigma_correction_value) << ','
      << (r.n ? std::to_string(*r.n) : "") << ',' << cell(r.delta) << ','
      << cell(r.discrete_penalty) << ',' << cell(r.var_un_value) << ','
      << cell(r.variance_ratio_term) << ',' << cell(r.tilde_total) << ',' << cell(r.gamma) << ','
      << cell(r.nonstat_penalty) << ','
      << (r.rate_tv_hat ? gpsm::format_double(r.rate_tv_hat->exponent) : "") << ','
      << (r.rate_tv_hat ? std::to_string(r.rate_tv_hat->log_power) : "") << ','
      << (r.rate_sigma_normalized ? gpsm::format_double(r.rate_sigma_normalized->exponent) : "")
      << '\n';
  return out.str();
}

int cmd_bounds(const Options& opt) {
  json config = parse_json_file(opt.config_path);
  std::vector<gpsm::Kernel> kernels;
  try {
    if (config.contains("kernels"))
      for (const auto& kj : config.at("kernels")) kernels.push_back(gpsm::Kernel::from_json(kj));
    else
      kernels.push_back(gpsm::Kernel::from_json(config.at("kernel")));
  } catch (const json::exception& e) {
    throw gpsm::invalid_input_error(std::string("bounds config: ") + e.what());
  }
  std::optional<double> gamma;
  if (config.contains("gamma")) gamma = config.at("gamma").get<double>();

  std::vector<std::pair<double, std::optional<std::pair<std::size_t, double>>>> cells;
  if (config.contains("horizons"))
    for (double T : config.at("horizons").get<std::vector<double>>())
      cells.emplace_back(T, std::nullopt);
  if (config.contains("designs")) {
    for (const auto& dj : config.at("designs")) {
      std::size_t n = dj.at("n").get<std::size_t>();
      double delta = dj.at("delta").get<double>();
      cells.emplace_back(static_cast<double>(n) * delta, std::make_pair(n, delta));
    }
  }
  if (cells.empty())
    throw gpsm::invalid_input_error("bounds config: needs 'horizons' and/or 'designs'");

  std::ostringstream out;
  out << "kernel,T,kappa3_bound,kappa4_bound,phi_T,var_VT,sigma_z_sq,sigma_correction,"
         "n,delta,discrete_penalty,var_UN,variance_ratio_term,tilde_total,gamma,"
         "nonstat_penalty,rate_tv_exponent,rate_tv_log_power,rate_sigma_exponent\n";
  json sidecar_rows = json::array();
  for (const auto& kernel : kernels) {
    for (const auto& [T, discrete] : cells) {
      gpsm::BoundReport report = gpsm::make_bound_report(kernel, T, discrete, gamma);
      out << bounds_csv_row(report);
      sidecar_rows.push_back(report.to_json());
    }
  }
  emit(opt, "bounds.csv", out.str());
  if (!opt.out_json_path.empty()) {
    json sidecar;
    sidecar["rows"] = sidecar_rows;
    sidecar["metadata"] = {{"created_utc", utc_now()}};
    gpsm::write_text_file(opt.out_json_path, sidecar.dump(2) + "\n");
    note(opt, "wrote " + opt.out_json_path);
  }
  return 0;
}

int cmd_experiment(const Options& opt) {
  json config_json = parse_json_file(opt.config_path);

  if (config_json.contains("probe")) {
    const json& pj = config_json.at("probe");
    gpsm::ModelSpec model = gpsm::ModelSpec::from_json(config_json.at("model"));
    int p = pj.value("p", 2);
    std::size_t replications = pj.value("replications", std::size_t{1000});
    std::uint64_t master = config_json.value("master_seed", std::uint64_t{1});
    if (opt.seed) master = *opt.seed;
    unsigned threads = opt.threads.value_or(config_json.value("threads", 1u));
    std::vector<gpsm::DesignPoint> grid;
    try {
      for (const auto& dj : pj.at("grid"))
        grid.push_back({dj.at("n").get<std::size_t>(), dj.at("delta").get<double>()});
    } catch (const json::exception& e) {
      throw gpsm::invalid_input_error(std::string("probe config: ") + e.what());
    }
    gpsm::ProbeReport report =
        gpsm::negative_moment_probe(model, p, grid, replications, master, threads);
    emit(opt, "probe.csv", report.csv());
    if (!opt.out_json_path.empty()) {
      json sidecar = report.to_json();
      sidecar["metadata"] = {{"created_utc", utc_now()}};
      gpsm::write_text_file(opt.out_json_path, sidecar.dump(2) + "\n");
      note(opt, "wrote " + opt.out_json_path);
    }
    return 0;
  }

  gpsm::ExperimentConfig config = gpsm::ExperimentConfig::from_json(config_json);
  if (opt.seed) config.master_seed = *opt.seed;
  if (opt.threads) config.threads = *opt.threads;
  config.validate();
  gpsm::ExperimentReport report = gpsm::run_experiment(config);
  emit(opt, "experiment.csv", report.csv());
  std::string json_path =
      opt.out_json_path.empty() ? join_out("experiment.json") : opt.out_json_path;
  json sidecar = report.sidecar_json();
  sidecar["metadata"] = {{"created_utc", utc_now()}};
  gpsm::write_text_file(json_path, sidecar.dump(2) + "\n");
  note(opt, "wrote " + json_path);
  return 0;
}

int cmd_rates(const Options& opt) {
  std::vector<double> betas;
  if (!opt.config_path.empty()) {
    json config = parse_json_file(opt.config_path);
    try {
      betas = config.at("betas").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw gpsm::invalid_input_error(std::string("rates config: ") + e.what());
    }
  } else {
    for (int i = 1; i <= 14; ++i) betas.push_back(static_cast<double>(i) / 20.0);
    betas.push_back(0.625);
    betas.push_back(2.0 / 3.0);
    betas.push_back(0.74);
    std::sort(betas.begin(), betas.end());
  }
  std::ostringstream out;
  out << "beta,tv_hat_exponent,tv_hat_log_power,sigma_normalized_exponent\n";
  for (double beta : betas) {
    gpsm::RateExponent tv = gpsm::rate_exponent(beta, gpsm::RateTarget::tv_hat);
    gpsm::RateExponent sn = gpsm::rate_exponent(beta, gpsm::RateTarget::sigma_normalized);
    out << gpsm::format_double(beta) << ',' << gpsm::format_double(tv.exponent) << ','
        << tv.log_power << ',' << gpsm::format_double(sn.exponent) << '\n';
  }
  if (opt.out_path.empty()) {
    std::cout << out.str();
  } else {
    emit(opt, "rates.csv", out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Toolkit for normal-approximation error of second-moment estimators of "
               "Gaussian processes"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool config_required) {
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required(config_required);
    sub->add_option("--out", opt.out_path, "output file ('-' for stdout)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress messages");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "sample one trajectory to CSV");
  add_common(simulate, true);
  std::uint64_t seed_value = 0, repl_value = 0;
  simulate->add_option("--seed", seed_value, "master seed override")
      ->each([&](const std::string&) { opt.seed = seed_value; });
  simulate->add_option("--replication", repl_value, "replication index override")
      ->each([&](const std::string&) { opt.replication = repl_value; });
  simulate->callback([&]() { opt.run_simulate = true; });

  CLI::App* estimate = app.add_subcommand("estimate", "second-moment estimates for a path CSV");
  estimate->add_option("--path", opt.path_file, "path CSV (t,value)")->required();
  estimate->add_option("--config", opt.config_path, "optional JSON with f_z or model");
  estimate->add_option("--out", opt.out_path, "output JSON file");
  estimate->add_flag("--quiet", opt.quiet, "suppress progress messages");
  estimate->callback([&]() { opt.run_estimate = true; });

  CLI::App* bounds = app.add_subcommand("bounds", "bound table for kernels and horizons");
  add_common(bounds, true);
  bounds->add_option("--out-json", opt.out_json_path, "optional JSON sidecar");
  bounds->add_subcommand("table", "emit the CSV table (default)")->fallthrough();
  bounds->callback([&]() { opt.run_bounds = true; });

  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo experiment battery");
  add_common(experiment, true);
  experiment->add_option("--out-json", opt.out_json_path, "sidecar JSON path");
  std::uint64_t exp_seed = 0;
  experiment->add_option("--seed", exp_seed, "master seed override")
      ->each([&](const std::string&) { opt.seed = exp_seed; });
  unsigned threads_value = 0;
  experiment->add_option("--threads", threads_value, "worker thread count")
      ->each([&](const std::string&) { opt.threads = threads_value; });
  experiment->callback([&]() { opt.run_experiment = true; });

  CLI::App* rates = app.add_subcommand("rates", "predicted log-log rate table");
  rates->add_option("--config", opt.config_path, "optional JSON with a 'betas' array");
  rates->add_option("--out", opt.out_path, "output CSV file");
  rates->add_flag("--quiet", opt.quiet, "suppress progress messages");
  rates->callback([&]() { opt.run_rates = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (opt.run_simulate) return cmd_simulate(opt);
    if (opt.run_estimate) return cmd_estimate(opt);
    if (opt.run_bounds) return cmd_bounds(opt);
    if (opt.run_experiment) return cmd_experiment(opt);
    if (opt.run_rates) return cmd_rates(opt);
  } catch (const gpsm::invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gpsm::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gpsm::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
