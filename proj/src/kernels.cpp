#include "gpsm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gpsm/errors.hpp"
#include "gpsm/mathutil.hpp"

namespace gpsm {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw invalid_input_error(msg);
}

// Integrate f over [a, b], splitting panels at the given interior kinks.
template <typename F>
double integrate_split(F&& f, double a, double b, const std::vector<double>& kinks,
                       const QuadOptions& opts) {
  if (kinks.empty()) return integrate(f, a, b, opts);
  double sum = 0.0;
  double lo = a;
  for (double k : kinks) {
    if (k <= lo) continue;
    if (k >= b) break;
    sum += integrate(f, lo, k, opts);
    lo = k;
  }
  return sum + integrate(f, lo, b, opts);
}

/// Stationary fOU autocovariance from the spectral density
///   f(lambda) = c_H |lambda|^{1-2H} / (theta^2 + lambda^2),
/// so rho(t) = 2 c_H * integral_0^inf cos(lambda t) g(lambda) dlambda with
/// g(lambda) = lambda^{1-2H} / (theta^2 + lambda^2).
///
/// The endpoint power is flattened by the substitution w = lambda^{2-2H};
/// past the first cosine zero beyond 2*theta, g is monotone, so the
/// half-period panel integrals alternate in sign and the tail is summed by
/// series acceleration.
double fou1_rho(double theta, double hurst, double spectral_const, double t) {
  const double t_abs = std::fabs(t);
  const double h = hurst;
  const double e = 2.0 - 2.0 * h;

  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-13 * std::pow(theta, -2.0 * h);

  auto g = [theta, h](double lam) {
    return std::pow(lam, 1.0 - 2.0 * h) / (theta * theta + lam * lam);
  };

  // integral_0^lc cos(lambda t) g(lambda) dlambda in the flattened variable.
  auto head = [&](double lc) {
    auto hw = [&](double w) {
      const double lam = std::pow(w, 1.0 / e);
      return std::cos(lam * t_abs) / (theta * theta + lam * lam);
    };
    return (1.0 / e) * integrate(hw, 0.0, std::pow(lc, e), opts);
  };

  if (t_abs == 0.0) {
    const double lc = 2.0 * theta;
    const double tail = integrate_tail_algebraic(g, lc, 1.0 + 2.0 * h, opts);
    return 2.0 * spectral_const * (head(lc) + tail);
  }

  // First cosine zero z_j = (j + 1/2) pi / t at or beyond 2*theta.
  double j0 = std::ceil(2.0 * theta * t_abs / kPi - 0.5);
  if (j0 < 0.0) j0 = 0.0;
  const double z0 = (j0 + 0.5) * kPi / t_abs;
  const double half_period = kPi / t_abs;

  auto integrand = [&](double lam) { return std::cos(lam * t_abs) * g(lam); };
  auto abs_panel = [&](int k) {
    const double a = z0 + k * half_period;
    std::size_t evals = 0;
    return std::fabs(quad_detail::gl_panel(integrand, a, a + half_period, 15, evals));
  };
  const double sign0 = (static_cast<long long>(j0) % 2 == 0) ? -1.0 : 1.0;
  const double tail = sign0 * alternating_sum(abs_panel, 30);
  return 2.0 * spectral_const * (head(z0) + tail);
}

double tabulated_rho(const std::vector<double>& lags, const std::vector<double>& values,
                     double t) {
  const double t_abs = std::fabs(t);
  if (t_abs >= lags.back()) return 0.0;
  auto it = std::upper_bound(lags.begin(), lags.end(), t_abs);
  const std::size_t i = static_cast<std::size_t>(it - lags.begin()) - 1;
  const double w = (t_abs - lags[i]) / (lags[i + 1] - lags[i]);
  return values[i] + w * (values[i + 1] - values[i]);
}

}  // namespace

Kernel Kernel::exp_ou(double rate, double variance) {
  require(std::isfinite(rate) && rate > 0.0, "exp_ou: rate must be positive");
  require(std::isfinite(variance) && variance > 0.0, "exp_ou: variance must be positive");
  return Kernel(ExpOuParams{rate, variance});
}

Kernel Kernel::gen_cauchy(double beta, double variance) {
  require(std::isfinite(beta) && beta > 0.0 && beta < 0.75,
          "gen_cauchy: beta must lie in (0, 3/4)");
  require(std::isfinite(variance) && variance > 0.0, "gen_cauchy: variance must be positive");
  return Kernel(GenCauchyParams{beta, variance});
}

Kernel Kernel::fou1_stationary(double rate, double hurst) {
  require(std::isfinite(rate) && rate > 0.0, "fou1_stationary: rate must be positive");
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          "fou1_stationary: hurst must lie in (0, 1)");
  const double c = std::tgamma(2.0 * hurst + 1.0) * std::sin(kPi * hurst) / (2.0 * kPi);
  return Kernel(Fou1Params{rate, hurst, c});
}

Kernel Kernel::tabulated(std::vector<double> lags, std::vector<double> values, double alpha,
                         std::optional<double> beta) {
  require(lags.size() == values.size(), "tabulated: lags and values must have equal length");
  require(lags.size() >= 2, "tabulated: need at least two points");
  require(lags.front() == 0.0, "tabulated: first lag must be 0");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    require(std::isfinite(lags[i]) && std::isfinite(values[i]),
            "tabulated: entries must be finite");
    if (i > 0) require(lags[i] > lags[i - 1], "tabulated: lags must be strictly increasing");
  }
  require(values.front() > 0.0, "tabulated: variance rho(0) must be positive");
  for (double v : values) {
    require(std::fabs(v) <= values.front(),
            "tabulated: |rho(t)| cannot exceed rho(0) for a valid autocovariance");
  }
  require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0,
          "tabulated: alpha must lie in (0, 1]");
  if (beta) {
    require(std::isfinite(*beta) && *beta > 0.0, "tabulated: beta must be positive");
  }
  return Kernel(TabulatedParams{std::move(lags), std::move(values), alpha, beta});
}

double Kernel::rho(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) {
          return p.variance * std::exp(-p.rate * std::fabs(t));
        } else if constexpr (std::is_same_v<T, GenCauchyParams>) {
          return p.variance * std::pow(1.0 + t * t, p.beta - 1.0);
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          return fou1_rho(p.rate, p.hurst, p.spectral_const, t);
        } else {
          return tabulated_rho(p.lags, p.values, t);
        }
      },
      storage_);
}

double Kernel::variance() const { return rho(0.0); }

double Kernel::alpha() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) {
          return 0.5;
        } else if constexpr (std::is_same_v<T, GenCauchyParams>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          return p.hurst;
        } else {
          return p.alpha;
        }
      },
      storage_);
}

std::optional<double> Kernel::decay_beta() const {
  return std::visit(
      [](const auto& p) -> std::optional<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GenCauchyParams>) {
          return p.beta;
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          return p.hurst;
        } else if constexpr (std::is_same_v<T, TabulatedParams>) {
          return p.beta;
        } else {
          return std::nullopt;
        }
      },
      storage_);
}

TailDecay Kernel::tail() const {
  return std::visit(
      [](const auto& p) -> TailDecay {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) {
          return {TailDecay::Kind::exponential, p.rate, 1.0 / p.rate};
        } else if constexpr (std::is_same_v<T, GenCauchyParams>) {
          return {TailDecay::Kind::algebraic, 2.0 - 2.0 * p.beta, 1.0};
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          return {TailDecay::Kind::algebraic, 2.0 - 2.0 * p.hurst, 3.0 / p.rate};
        } else {
          return {TailDecay::Kind::compact, p.lags.back(), p.lags.back()};
        }
      },
      storage_);
}

KernelFamily Kernel::family() const {
  return std::visit(
      [](const auto& p) -> KernelFamily {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) return KernelFamily::exp_ou;
        if constexpr (std::is_same_v<T, GenCauchyParams>) return KernelFamily::gen_cauchy;
        if constexpr (std::is_same_v<T, Fou1Params>) return KernelFamily::fou1_stationary;
        return KernelFamily::tabulated;
      },
      storage_);
}

std::string Kernel::describe() const {
  char buf[128];
  return std::visit(
      [&buf](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) {
          std::snprintf(buf, sizeof buf, "exp_ou(rate=%g,variance=%g)", p.rate, p.variance);
        } else if constexpr (std::is_same_v<T, GenCauchyParams>) {
          std::snprintf(buf, sizeof buf, "gen_cauchy(beta=%g,variance=%g)", p.beta, p.variance);
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          std::snprintf(buf, sizeof buf, "fou1_stationary(rate=%g,hurst=%g)", p.rate, p.hurst);
        } else {
          std::snprintf(buf, sizeof buf, "tabulated(%zu points)", p.lags.size());
        }
        return std::string(buf);
      },
      storage_);
}

Kernel Kernel::from_json(const nlohmann::json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const nlohmann::json& p = j.at("params");
    if (family == "exp_ou") {
      return exp_ou(p.at("rate").get<double>(), p.at("variance").get<double>());
    }
    if (family == "gen_cauchy") {
      return gen_cauchy(p.at("beta").get<double>(), p.at("variance").get<double>());
    }
    if (family == "fou1_stationary") {
      return fou1_stationary(p.at("rate").get<double>(), p.at("hurst").get<double>());
    }
    if (family == "tabulated") {
      std::optional<double> beta;
      if (p.contains("beta") && !p.at("beta").is_null()) beta = p.at("beta").get<double>();
      return tabulated(p.at("lags").get<std::vector<double>>(),
                       p.at("values").get<std::vector<double>>(), p.at("alpha").get<double>(),
                       beta);
    }
    throw invalid_input_error("kernel: unknown family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input_error(std::string("kernel: malformed JSON (") + e.what() + ")");
  }
}

nlohmann::json Kernel::to_json() const {
  nlohmann::json j;
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpOuParams>) {
          j = {{"family", "exp_ou"}, {"params", {{"rate", p.rate}, {"variance", p.variance}}}};
        } else if constexpr (std::is_same_v<T, GenCauchyParams>) {
          j = {{"family", "gen_cauchy"},
               {"params", {{"beta", p.beta}, {"variance", p.variance}}}};
        } else if constexpr (std::is_same_v<T, Fou1Params>) {
          j = {{"family", "fou1_stationary"},
               {"params", {{"rate", p.rate}, {"hurst", p.hurst}}}};
        } else {
          nlohmann::json beta;
          if (p.beta) beta = *p.beta;
          j = {{"family", "tabulated"},
               {"params",
                {{"lags", p.lags}, {"values", p.values}, {"alpha", p.alpha}, {"beta", beta}}}};
        }
      },
      storage_);
  return j;
}

std::vector<double> Kernel::segment_boundaries() const {
  if (const auto* p = std::get_if<TabulatedParams>(&storage_)) return p->lags;
  return {};
}

/// Integral of f over [0, min(T, support)], where f is built from rho and
/// decays at `decay_rate` when the kernel tail is exponential.  A direct
/// panel scan of [0, T] cannot find a bump of width ~1/decay_rate once T is
/// thousands of decay lengths (every node lands where f underflows), so past
/// the tail onset the substitution x = exp(-decay_rate * (u - onset)) places
/// nodes by decay depth instead.
template <typename F>
double integrate_decaying(const Kernel& kernel, F&& f, double T, double decay_rate,
                          const QuadOptions& opts) {
  const TailDecay tail = kernel.tail();
  const auto kinks = kernel.segment_boundaries();
  if (tail.kind == TailDecay::Kind::exponential && T > tail.onset) {
    const double head = integrate_split(f, 0.0, tail.onset, kinks, opts);
    // Underflow of x_lo to 0 only truncates mass below double precision.
    const double x_lo = std::exp(-decay_rate * (T - tail.onset));
    auto g = [&f, onset = tail.onset, r = decay_rate](double x) {
      return f(onset - std::log(x) / r) / (r * x);
    };
    return head + integrate(g, x_lo, 1.0, opts);
  }
  const double upper =
      (tail.kind == TailDecay::Kind::compact) ? std::min(T, tail.param) : T;
  return integrate_split(f, 0.0, upper, kinks, opts);
}

double lp_integral(const Kernel& kernel, double p, double T, const QuadOptions& opts) {
  require(std::isfinite(p) && p > 0.0, "lp_integral: p must be positive");
  require(std::isfinite(T) && T > 0.0, "lp_integral: T must be positive");
  auto f = [&kernel, p](double t) { return std::pow(std::fabs(kernel.rho(t)), p); };
  const double rate = p * kernel.tail().param;
  return 2.0 * integrate_decaying(kernel, f, T, rate, opts);
}

double sigma_z_sq(const Kernel& kernel, const QuadOptions& opts) {
  auto f2 = [&kernel](double u) {
    const double r = kernel.rho(u);
    return r * r;
  };
  const TailDecay tail = kernel.tail();
  double head = 0.0, rest = 0.0;
  switch (tail.kind) {
    case TailDecay::Kind::exponential: {
      head = integrate(f2, 0.0, tail.onset, opts);
      rest = integrate_tail_exponential(f2, tail.onset, 2.0 * tail.param, opts);
      break;
    }
    case TailDecay::Kind::algebraic: {
      const double q = 2.0 * tail.param;  // rho^2 = O(t^{-2 param})
      if (q <= 1.0) {
        throw invalid_input_error(
            "sigma_z_sq: rho is not square-integrable (decay index beta >= 3/4)");
      }
      head = integrate(f2, 0.0, tail.onset, opts);
      rest = integrate_tail_algebraic(f2, tail.onset, q, opts);
      break;
    }
    case TailDecay::Kind::compact: {
      head = integrate_split(f2, 0.0, tail.param, kernel.segment_boundaries(), opts);
      break;
    }
  }
  return 4.0 * (head + rest);
}

double var_vt(const Kernel& kernel, double T, const QuadOptions& opts) {
  require(std::isfinite(T) && T > 0.0, "var_vt: T must be positive");
  auto f = [&kernel, T](double u) {
    const double r = kernel.rho(u);
    return (1.0 - u / T) * r * r;
  };
  const double rate = 2.0 * kernel.tail().param;
  return 4.0 * integrate_decaying(kernel, f, T, rate, opts);
}

}  // namespace gpsm
