#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "gpsm/kernels.hpp"
#include "gpsm/path.hpp"
#include "gpsm/rng.hpp"

namespace gpsm {

/// Exact sampler for a stationary Gaussian process on a uniform grid via
/// circulant embedding of the covariance sequence.  Eigenvalues are computed
/// once at construction; sample() is thread-safe and bit-deterministic in
/// the seed.  Tiny negative eigenvalues (>= -1e-8 relative) are clipped;
/// anything worse raises not_embeddable_error.
class CirculantSampler {
 public:
  CirculantSampler(const Kernel& kernel, const GridSpec& grid);
  Path sample(const SeedSpec& seed) const;
  std::size_t embedding_size() const { return scale_.size(); }

 private:
  GridSpec grid_;
  std::vector<double> scale_;  // sqrt(lambda_k / M), halved off the real axis
};

/// Exact fractional Brownian motion on a uniform grid (B_0 = 0): circulant
/// embedding of the increment covariance, then a cumulative sum.
class FbmSampler {
 public:
  FbmSampler(double hurst, const GridSpec& grid);
  Path sample(const SeedSpec& seed) const;

 private:
  GridSpec grid_;
  std::vector<double> scale_;
};

/// Fractional OU driven by fBm, X_0 = 0:
///   X_t = B_t - theta * integral_0^t exp(-theta (t-s)) B_s ds,
/// with the integral advanced by an exponential-weight trapezoid recursion.
class Fou1Sampler {
 public:
  Fou1Sampler(double theta, double hurst, const GridSpec& grid);
  Path sample(const SeedSpec& seed) const;

 private:
  double theta_;
  FbmSampler fbm_;
};

/// Stationary-regime sampler for the second-kind fractional OU process
///   S_t = integral exp(-mu (t-s)) dY_s,  Y_t = integral_0^t e^{-s} dB_{a_s},
/// a_s = H e^{s/H}.  Increments dY over grid cells are jointly Gaussian with
/// covariance C_ij = e^{-t_i - t_j} Cov(dB_i, dB_j); one dense factorization
/// at construction serves every replication.  A burn-in window (discarded
/// before t = 0) removes the S_0 = 0 transient.
class Fou2Sampler {
 public:
  Fou2Sampler(double mu, double hurst, const GridSpec& grid, double burn_in = 0.0);
  Path sample(const SeedSpec& seed) const;

  /// Covariance of the scaled fBm increments over the extended grid
  /// (burn-in included); exposed for validation.
  const Eigen::MatrixXd& increment_covariance() const { return cov_; }

 private:
  double mu_, hurst_, burn_in_;
  GridSpec grid_;
  std::size_t total_steps_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;  // lower factor
};

/// Dense Gaussian sampler: factor once, draw many.  Jitter escalates over
/// {0, 1e-12, 1e-10, 1e-8} * max diagonal before giving up.
class CholeskySampler {
 public:
  explicit CholeskySampler(Eigen::MatrixXd covariance);
  Eigen::VectorXd sample(const SeedSpec& seed) const;
  double jitter_used() const { return jitter_; }

 private:
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

/// Dense covariance matrix of a stationary kernel on an arbitrary grid.
Eigen::MatrixXd stationary_covariance(const Kernel& kernel, const GridSpec& grid);

// One-shot conveniences.
Path sample_stationary_uniform(const Kernel& kernel, const GridSpec& grid, const SeedSpec& seed);
Eigen::VectorXd sample_gaussian_cholesky(const Eigen::MatrixXd& covariance, const SeedSpec& seed);
Path sample_fbm(double hurst, const GridSpec& grid, const SeedSpec& seed);
Path build_fou1_path(double theta, double hurst, const GridSpec& grid, const SeedSpec& seed);
Path build_fou2_path(double mu, double hurst, const GridSpec& grid, const SeedSpec& seed,
                     double burn_in = 0.0);

}  // namespace gpsm
