#include "gpsm/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "gpsm/errors.hpp"

namespace gpsm {

namespace {
// Serializes every FFTW planner call; execution does not need it.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

struct Fft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {

std::shared_ptr<const Fft::Plans> plans_for(std::size_t n) {
  static std::map<std::size_t, std::shared_ptr<const Fft::Plans>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  fftw_complex* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw numeric_error("fft: allocation failed");
  auto plans = std::make_shared<Fft::Plans>();
  plans->fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plans->bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  if (plans->fwd == nullptr || plans->bwd == nullptr) {
    throw numeric_error("fft: plan creation failed");
  }
  cache.emplace(n, plans);
  return plans;
}

// Execute through freshly allocated aligned storage; fftw_execute_dft on a
// cached plan is thread-safe, and fftw_malloc keeps the alignment the plan
// was created with.
void run(const fftw_plan plan, std::vector<std::complex<double>>& data, std::size_t n) {
  fftw_complex* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw numeric_error("fft: allocation failed");
  std::memcpy(static_cast<void*>(buf), static_cast<const void*>(data.data()),
              n * sizeof(fftw_complex));
  fftw_execute_dft(plan, buf, buf);
  std::memcpy(static_cast<void*>(data.data()), static_cast<const void*>(buf),
              n * sizeof(fftw_complex));
  fftw_free(buf);
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw invalid_input_error("fft: size must be positive");
  plans_ = plans_for(n);
}

void Fft::forward(std::vector<std::complex<double>>& data) const {
  if (data.size() != n_) throw invalid_input_error("fft: data length mismatch");
  run(plans_->fwd, data, n_);
}

void Fft::inverse(std::vector<std::complex<double>>& data) const {
  if (data.size() != n_) throw invalid_input_error("fft: data length mismatch");
  run(plans_->bwd, data, n_);
}

}  // namespace gpsm
