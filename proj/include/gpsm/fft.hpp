#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace gpsm {

/// Complex 1-D DFT backed by FFTW.  Plans (FFTW_ESTIMATE) are cached per
/// size behind a mutex; execution copies through internal aligned storage,
/// so a given call is thread-safe and bit-reproducible regardless of how
/// many threads are running transforms.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place unnormalized forward transform, kernel exp(-2 pi i jk / n).
  void forward(std::vector<std::complex<double>>& data) const;

  /// In-place unnormalized backward transform (no 1/n factor).
  void inverse(std::vector<std::complex<double>>& data) const;

  struct Plans;

 private:
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace gpsm
