#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gpsm/quadrature.hpp"

namespace gpsm {

enum class KernelFamily { exp_ou, gen_cauchy, fou1_stationary, tabulated };

/// How |rho| behaves as t -> infinity; drives the choice of tail
/// substitution in improper integrals.
struct TailDecay {
  enum class Kind { exponential, algebraic, compact } kind;
  double param = 0.0;  // rate for exponential, q with rho = O(t^-q) for algebraic
  double onset = 1.0;  // lag beyond which the decay model is a good description
};

/// Stationary autocovariance function rho(t) = Cov(Z_t, Z_0) together with
/// the regularity (alpha) and decay (beta) indices used by the error bounds.
///
/// Families:
///   exp_ou(rate, variance)        rho(t) = variance * exp(-rate * |t|)
///   gen_cauchy(beta, variance)    rho(t) = variance * (1 + t^2)^(beta - 1)
///   fou1_stationary(rate, hurst)  stationary fractional OU, evaluated from
///                                 its spectral density
///   tabulated(lags, values, ...)  linear interpolation, zero past the last lag
class Kernel {
 public:
  static Kernel exp_ou(double rate, double variance);
  static Kernel gen_cauchy(double beta, double variance);
  static Kernel fou1_stationary(double rate, double hurst);
  static Kernel tabulated(std::vector<double> lags, std::vector<double> values,
                          double alpha, std::optional<double> beta);

  static Kernel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// Autocovariance at lag t (even in t).
  double rho(double t) const;

  /// Marginal variance rho(0).
  double variance() const;

  /// Hoelder mean-square regularity index, in (0, 1].
  double alpha() const;

  /// Polynomial decay index beta with rho(t) = O(t^{2 beta - 2}), when the
  /// kernel decays polynomially.
  std::optional<double> decay_beta() const;

  TailDecay tail() const;
  KernelFamily family() const;
  std::string describe() const;

  /// Lags where rho has kinks (tabulated interpolation nodes); empty for the
  /// smooth families.  Quadratures split panels there.
  std::vector<double> segment_boundaries() const;

 private:
  struct ExpOuParams {
    double rate, variance;
  };
  struct GenCauchyParams {
    double beta, variance;
  };
  struct Fou1Params {
    double rate, hurst, spectral_const;  // spectral_const = Gamma(2H+1) sin(pi H) / (2 pi)
  };
  struct TabulatedParams {
    std::vector<double> lags, values;
    double alpha;
    std::optional<double> beta;
  };
  using Storage = std::variant<ExpOuParams, GenCauchyParams, Fou1Params, TabulatedParams>;

  explicit Kernel(Storage s) : storage_(std::move(s)) {}
  Storage storage_;
};

/// 2 * integral_0^T |rho(t)|^p dt = integral over [-T, T].
double lp_integral(const Kernel& kernel, double p, double T, const QuadOptions& opts = {});

/// Limiting variance 4 * integral_0^infinity rho(u)^2 du of the normalized
/// continuous estimator.  Throws when rho is not square integrable.
double sigma_z_sq(const Kernel& kernel, const QuadOptions& opts = {});

/// Exact variance 4 * integral_0^T (1 - u/T) rho(u)^2 du of
/// sqrt(T) * (f_hat - f_Z); increases to sigma_z_sq as T grows.
double var_vt(const Kernel& kernel, double T, const QuadOptions& opts = {});

}  // namespace gpsm
