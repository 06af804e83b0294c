#include "gpsm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "gpsm/mathutil.hpp"

namespace gpsm {
namespace quad_detail {

namespace {

std::pair<std::vector<double>, std::vector<double>> make_gauss_legendre(int n) {
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x).
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  return {nodes, weights};
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, make_gauss_legendre(n)).first;
  }
  return it->second;
}

}  // namespace quad_detail

double alternating_sum(const std::function<double(int)>& abs_term, int n_terms) {
  if (n_terms < 1 || n_terms > 300) {
    throw invalid_input_error("alternating_sum: term count out of range");
  }
  double d = std::pow(3.0 + std::sqrt(8.0), n_terms);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n_terms; ++k) {
    c = b - c;
    s += c * abs_term(k);
    b = (k + n_terms) * (k - n_terms) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

}  // namespace gpsm
