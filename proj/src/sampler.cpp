#include "gpsm/sampler.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "gpsm/errors.hpp"
#include "gpsm/fft.hpp"
#include "gpsm/mathutil.hpp"
#include "gpsm/quadrature.hpp"

namespace gpsm {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw invalid_input_error(msg);
}

// Spectral scales sqrt(lambda_k / M) for the symmetric circulant embedding
// of the covariance lags c_0..c_m (embedding length M = 2m).  Interior
// harmonics carry two normals, so their scale absorbs a 1/sqrt(2).
std::vector<double> embedding_scales(const std::vector<double>& lags) {
  const std::size_t m = lags.size() - 1;
  const std::size_t M = 2 * m;
  std::vector<std::complex<double>> c(M);
  for (std::size_t j = 0; j <= m; ++j) c[j] = lags[j];
  for (std::size_t j = 1; j < m; ++j) c[M - j] = lags[j];
  Fft(M).forward(c);

  double max_eig = 0.0;
  for (const auto& e : c) max_eig = std::max(max_eig, e.real());
  if (!(max_eig > 0.0)) throw not_embeddable_error("circulant embedding: no positive spectrum");

  double min_eig = 0.0;
  for (const auto& e : c) min_eig = std::min(min_eig, e.real());
  if (min_eig < -1e-8 * max_eig) {
    throw not_embeddable_error(
        "circulant embedding: negative eigenvalue " + std::to_string(min_eig) +
        " (max " + std::to_string(max_eig) + "); use a dense factorization instead");
  }

  std::vector<double> scale(M);
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t k = 0; k < M; ++k) {
    const double lam = std::max(c[k].real(), 0.0);
    scale[k] = std::sqrt(lam * inv_m);
    if (k != 0 && k != m) scale[k] *= std::sqrt(0.5);
  }
  return scale;
}

// Draw one real stationary block of length M from precomputed scales.
// Consumption order is fixed: DC, then (re, im) per interior harmonic in
// index order, then Nyquist.
std::vector<double> sample_from_scales(const std::vector<double>& scale, PhiloxRng& rng) {
  const std::size_t M = scale.size();
  const std::size_t m = M / 2;
  std::vector<std::complex<double>> y(M);
  y[0] = scale[0] * rng.next_normal();
  for (std::size_t k = 1; k < m; ++k) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    y[k] = scale[k] * std::complex<double>(re, im);
    y[M - k] = std::conj(y[k]);
  }
  y[m] = scale[m] * rng.next_normal();
  Fft(M).forward(y);
  std::vector<double> out(M);
  for (std::size_t j = 0; j < M; ++j) out[j] = y[j].real();
  return out;
}

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd cov, double* jitter_out) {
  const double max_diag = cov.diagonal().maxCoeff();
  require(std::isfinite(max_diag) && max_diag > 0.0,
          "cholesky: covariance diagonal must be positive");
  static constexpr double kJitters[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double rel : kJitters) {
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += rel * max_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      if (jitter_out) *jitter_out = rel * max_diag;
      return llt.matrixL();
    }
  }
  throw numeric_error("cholesky: covariance not positive definite within the jitter budget");
}

}  // namespace

CirculantSampler::CirculantSampler(const Kernel& kernel, const GridSpec& grid) : grid_(grid) {
  require(grid.is_uniform(), "circulant sampler: grid must be uniform");
  const std::size_t points = grid.point_count();
  const std::size_t m = next_pow2(points);
  std::vector<double> lags(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    lags[j] = kernel.rho(static_cast<double>(j) * grid.delta());
  }
  scale_ = embedding_scales(lags);
}

Path CirculantSampler::sample(const SeedSpec& seed) const {
  PhiloxRng rng(seed);
  std::vector<double> block = sample_from_scales(scale_, rng);
  block.resize(grid_.point_count());
  return Path{grid_, std::move(block), PathKind::stationary, seed};
}

FbmSampler::FbmSampler(double hurst, const GridSpec& grid) : grid_(grid) {
  require(std::isfinite(hurst) && hurst > 0.0 && hurst < 1.0,
          "fbm sampler: hurst must lie in (0, 1)");
  require(grid.is_uniform(), "fbm sampler: grid must be uniform");
  const std::size_t n = grid.steps();
  const std::size_t m = next_pow2(n);
  const double h2 = 2.0 * hurst;
  const double step_var = std::pow(grid.delta(), h2);
  // Fractional Gaussian noise autocovariance as a stable second difference
  // of j^(2H).
  std::vector<double> lags(m + 1);
  lags[0] = step_var;
  for (std::size_t j = 1; j <= m; ++j) {
    const double x = static_cast<double>(j);
    const double fwd = std::expm1(h2 * std::log1p(1.0 / x));
    const double bwd = std::expm1(h2 * std::log1p(-1.0 / x));
    lags[j] = 0.5 * step_var * std::pow(x, h2) * (fwd + bwd);
  }
  scale_ = embedding_scales(lags);
}

Path FbmSampler::sample(const SeedSpec& seed) const {
  PhiloxRng rng(seed);
  const std::vector<double> noise = sample_from_scales(scale_, rng);
  std::vector<double> values(grid_.point_count());
  values[0] = 0.0;
  for (std::size_t i = 0; i < grid_.steps(); ++i) values[i + 1] = values[i] + noise[i];
  return Path{grid_, std::move(values), PathKind::fbm, seed};
}

Fou1Sampler::Fou1Sampler(double theta, double hurst, const GridSpec& grid)
    : theta_(theta), fbm_(hurst, grid) {
  require(std::isfinite(theta) && theta > 0.0, "fou1 sampler: theta must be positive");
}

Path Fou1Sampler::sample(const SeedSpec& seed) const {
  Path path = fbm_.sample(seed);
  const std::vector<double>& b = path.values;
  const double delta = path.grid.delta();
  const double w = std::exp(-theta_ * delta);
  std::vector<double> values(b.size());
  values[0] = 0.0;
  double integral = 0.0;  // integral_0^t exp(-theta (t-s)) B_s ds
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    integral = w * integral + 0.5 * delta * (w * b[i] + b[i + 1]);
    values[i + 1] = b[i + 1] - theta_ * integral;
  }
  return Path{path.grid, std::move(values), PathKind::fou1, seed};
}

Fou2Sampler::Fou2Sampler(double mu, double hurst, const GridSpec& grid, double burn_in)
    : mu_(mu), hurst_(hurst), burn_in_(burn_in), grid_(grid) {
  require(std::isfinite(mu) && mu > 0.0, "fou2 sampler: mu must be positive");
  require(std::isfinite(hurst) && hurst > 0.5 && hurst < 1.0,
          "fou2 sampler: hurst must lie in (1/2, 1)");
  require(grid.is_uniform(), "fou2 sampler: grid must be uniform");
  require(std::isfinite(burn_in) && burn_in >= 0.0, "fou2 sampler: burn-in must be >= 0");

  const double delta = grid.delta();
  const std::size_t burn_steps =
      burn_in > 0.0 ? static_cast<std::size_t>(std::ceil(burn_in / delta - 1e-9)) : 0;
  total_steps_ = grid.steps() + burn_steps;
  require(total_steps_ <= 4096,
          "fou2 sampler: grid too large for a dense factorization (max 4096 steps)");

  const double h = hurst;
  const double h2 = 2.0 * h;
  // Warped clock a(t) = H exp(t / H); representable horizons are capped by
  // the double-precision range of a(t)^(2H).
  const std::size_t n_steps = total_steps_;
  const double t_max = static_cast<double>(n_steps) * delta;
  require(h * std::exp(t_max / h) <= 1e100,
          "fou2 sampler: horizon too large for the warped-time representation");

  std::vector<double> t(n_steps + 1), a(n_steps + 1), da(n_steps);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    t[i] = static_cast<double>(i) * delta;
    a[i] = h * std::exp(t[i] / h);
  }
  const double growth = std::expm1(delta / h);
  for (std::size_t i = 0; i < n_steps; ++i) da[i] = a[i] * growth;

  const double coef = h * (h2 - 1.0);
  const auto& [gl12_x, gl12_w] = quad_detail::gauss_legendre(12);
  const auto& [gl4_x, gl4_w] = quad_detail::gauss_legendre(4);

  // Cov(dB over [a_i, a_{i+1}], dB over [a_j, a_{j+1}]) for j > i + 1 via
  // H(2H-1) * double integral of (gap + s + u)^(2H-2).
  auto separated = [&](std::size_t i, std::size_t j) {
    const double gap = a[i + 1] * std::expm1(static_cast<double>(j - i - 1) * delta / h);
    const double A = da[i], B = da[j];
    const bool close = (A + B) > 0.1 * gap;
    const auto& gx = close ? gl12_x : gl4_x;
    const auto& gw = close ? gl12_w : gl4_w;
    double sum = 0.0;
    for (std::size_t p = 0; p < gx.size(); ++p) {
      const double s = 0.5 * A * (1.0 + gx[p]);
      double inner = 0.0;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        const double u = 0.5 * B * (1.0 + gx[q]);
        inner += gw[q] * std::pow(gap + s + u, h2 - 2.0);
      }
      sum += gw[p] * inner;
    }
    return coef * 0.25 * A * B * sum;
  };

  cov_.resize(n_steps, n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    cov_(i, i) = std::exp(h2 * std::log(da[i]) - 2.0 * t[i]);
    if (i + 1 < n_steps) {
      // Adjacent increments: 0.5 ((A+B)^2H - A^2H - B^2H), factored to stay
      // in range for large warped times.
      const double r = da[i + 1] / da[i];
      const double core = std::pow(1.0 + r, h2) - 1.0 - std::pow(r, h2);
      const double g = 0.5 * core * std::exp(h2 * std::log(da[i]) - t[i] - t[i + 1]);
      cov_(i, i + 1) = g;
      cov_(i + 1, i) = g;
    }
    for (std::size_t j = i + 2; j < n_steps; ++j) {
      const double g = separated(i, j) * std::exp(-t[i] - t[j]);
      cov_(i, j) = g;
      cov_(j, i) = g;
    }
  }
  chol_ = cholesky_with_jitter(cov_, nullptr);
}

Path Fou2Sampler::sample(const SeedSpec& seed) const {
  PhiloxRng rng(seed);
  Eigen::VectorXd z(static_cast<Eigen::Index>(total_steps_));
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  const Eigen::VectorXd dy = chol_.triangularView<Eigen::Lower>() * z;

  const double w = std::exp(-mu_ * grid_.delta());
  const std::size_t burn_steps = total_steps_ - grid_.steps();
  std::vector<double> values(grid_.point_count());
  double s = 0.0;
  for (std::size_t i = 0; i < total_steps_; ++i) {
    s = w * (s + dy[static_cast<Eigen::Index>(i)]);
    if (i + 1 >= burn_steps) values[i + 1 - burn_steps] = s;
  }
  if (burn_steps == 0) values[0] = 0.0;
  return Path{grid_, std::move(values), PathKind::fou2, seed};
}

CholeskySampler::CholeskySampler(Eigen::MatrixXd covariance) {
  require(covariance.rows() == covariance.cols(), "cholesky sampler: matrix must be square");
  require(covariance.rows() >= 1, "cholesky sampler: matrix must be nonempty");
  require(covariance.rows() <= 8192, "cholesky sampler: dimension cap is 8192");
  require(covariance.allFinite(), "cholesky sampler: covariance has non-finite entries");
  const double scale = covariance.cwiseAbs().maxCoeff();
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * std::max(scale, 1e-300),
          "cholesky sampler: covariance is not symmetric");
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
  chol_ = cholesky_with_jitter(std::move(covariance), &jitter_);
}

Eigen::VectorXd CholeskySampler::sample(const SeedSpec& seed) const {
  PhiloxRng rng(seed);
  Eigen::VectorXd z(chol_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  return chol_.triangularView<Eigen::Lower>() * z;
}

Eigen::MatrixXd stationary_covariance(const Kernel& kernel, const GridSpec& grid) {
  const std::size_t n = grid.point_count();
  Eigen::MatrixXd cov(n, n);
  if (grid.is_uniform()) {
    std::vector<double> lag(n);
    for (std::size_t j = 0; j < n; ++j) lag[j] = kernel.rho(static_cast<double>(j) * grid.delta());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cov(i, j) = lag[i >= j ? i - j : j - i];
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        cov(i, j) = cov(j, i) = kernel.rho(grid.time(i) - grid.time(j));
      }
    }
  }
  return cov;
}

Path sample_stationary_uniform(const Kernel& kernel, const GridSpec& grid, const SeedSpec& seed) {
  return CirculantSampler(kernel, grid).sample(seed);
}

Eigen::VectorXd sample_gaussian_cholesky(const Eigen::MatrixXd& covariance, const SeedSpec& seed) {
  return CholeskySampler(covariance).sample(seed);
}

Path sample_fbm(double hurst, const GridSpec& grid, const SeedSpec& seed) {
  return FbmSampler(hurst, grid).sample(seed);
}

Path build_fou1_path(double theta, double hurst, const GridSpec& grid, const SeedSpec& seed) {
  return Fou1Sampler(theta, hurst, grid).sample(seed);
}

Path build_fou2_path(double mu, double hurst, const GridSpec& grid, const SeedSpec& seed,
                     double burn_in) {
  return Fou2Sampler(mu, hurst, grid, burn_in).sample(seed);
}

}  // namespace gpsm
