#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gpsm/errors.hpp"

namespace gpsm {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_depth = 48;
  std::size_t max_evals = 4'000'000;
};

namespace quad_detail {

/// Gauss-Legendre nodes and weights on [-1, 1], generated once per order by
/// Newton iteration on the Legendre recurrence.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

template <typename F>
double gl_panel(F& f, double a, double b, int order, std::size_t& evals) {
  const auto& [x, w] = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += w[i] * f(mid + half * x[i]);
  }
  evals += x.size();
  return half * sum;
}

template <typename F>
struct AdaptiveState {
  F& f;
  const QuadOptions& opts;
  double global_budget;  // absolute error allowance for the whole interval
  double total_width;
  double err_accum = 0.0;
  std::size_t evals = 0;

  double refine(double a, double b, double coarse, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gl_panel(f, a, m, 15, evals);
    const double right = gl_panel(f, m, b, 15, evals);
    const double fine = left + right;
    const double err = std::fabs(fine - coarse);
    if (!std::isfinite(fine)) {
      throw numeric_error("integrate: integrand produced a non-finite value");
    }
    const double budget = global_budget * (b - a) / total_width;
    // Accept once the estimate is at the rounding level of the panel sums:
    // bisecting further cannot reduce floating-point noise, only add panels.
    const double noise =
        4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
    if (err <= std::max(budget, noise) || depth >= opts.max_depth) {
      if (depth >= opts.max_depth && err > noise) err_accum += err;
      return fine;
    }
    if (evals > opts.max_evals) {
      throw numeric_error("integrate: evaluation budget exhausted before reaching tolerance");
    }
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  }
};

}  // namespace quad_detail

/// Adaptive Gauss-Legendre quadrature of f over [a, b].  Converges to
/// max(abs_tol, rel_tol * |I|); throws numeric_error when it cannot.
template <typename F>
double integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw invalid_input_error("integrate: bounds must be finite");
  }
  if (a == b) return 0.0;
  if (a > b) return -integrate(std::forward<F>(f), b, a, opts);

  std::size_t evals0 = 0;
  double whole = quad_detail::gl_panel(f, a, b, 15, evals0);
  if (!std::isfinite(whole)) {
    throw numeric_error("integrate: integrand produced a non-finite value");
  }
  quad_detail::AdaptiveState<F> state{
      f, opts, std::max(opts.abs_tol, opts.rel_tol * std::fabs(whole)), b - a};
  state.evals = evals0;
  double result = state.refine(a, b, whole, 0);
  const double tolerance = std::max(opts.abs_tol, opts.rel_tol * std::fabs(result));
  if (state.err_accum > tolerance) {
    throw numeric_error("integrate: failed to converge (residual error " +
                        std::to_string(state.err_accum) + ", tolerance " +
                        std::to_string(tolerance) + ")");
  }
  return result;
}

/// Integral of f over [a, infinity) for integrands decaying like u^{-q},
/// q > 1.  Substitutes u = a * x^{-1/(q-1)}, which maps the exact power decay
/// to a flat integrand on (0, 1].
template <typename F>
double integrate_tail_algebraic(F&& f, double a, double q, const QuadOptions& opts = {}) {
  if (!(a > 0.0)) throw invalid_input_error("integrate_tail_algebraic: a must be positive");
  if (!(q > 1.0)) throw invalid_input_error("integrate_tail_algebraic: need decay exponent q > 1");
  const double s = 1.0 / (q - 1.0);
  const double u_cap = 1e250;
  const double x_min = (a < u_cap) ? std::pow(a / u_cap, 1.0 / s) : 1.0;

  auto g = [&f, a, s](double x) {
    const double u = a * std::pow(x, -s);
    return f(u) * a * s * std::pow(x, -s - 1.0);
  };
  const double g_floor = (x_min > 0.0) ? g(x_min) : 0.0;
  auto clipped = [&g, g_floor, x_min](double x) { return x < x_min ? g_floor : g(x); };
  return integrate(clipped, 0.0, 1.0, opts);
}

/// Integral of f over [a, infinity) for integrands with exponential decay at
/// the given (or slightly underestimated) rate.  Substitutes
/// u = a - log(x) / rate on x in (0, 1].
template <typename F>
double integrate_tail_exponential(F&& f, double a, double rate, const QuadOptions& opts = {}) {
  if (!(rate > 0.0)) throw invalid_input_error("integrate_tail_exponential: rate must be positive");
  auto g = [&f, a, rate](double x) { return f(a - std::log(x) / rate) / (rate * x); };
  return integrate(g, 0.0, 1.0, opts);
}

/// Accelerated sum of the alternating series sum_{k>=0} (-1)^k a_k with
/// a_k = abs_term(k) >= 0 eventually smooth and decreasing
/// (Cohen-Rodriguez Villegas-Zagier scheme; error ~ (3+sqrt 8)^{-n}).
double alternating_sum(const std::function<double(int)>& abs_term, int n_terms);

}  // namespace gpsm
