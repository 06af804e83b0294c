#include "gpsm/path.hpp"

#include <cmath>

#include "gpsm/errors.hpp"

namespace gpsm {

GridSpec GridSpec::uniform(std::size_t n, double delta) {
  if (n < 1) throw invalid_input_error("grid: need at least one step");
  if (!(std::isfinite(delta) && delta > 0.0)) {
    throw invalid_input_error("grid: delta must be positive");
  }
  GridSpec g;
  g.n_ = n;
  g.delta_ = delta;
  g.uniform_ = true;
  return g;
}

GridSpec GridSpec::at_times(std::vector<double> times) {
  if (times.size() < 2) throw invalid_input_error("grid: need at least two time points");
  if (!(std::isfinite(times.front()) && times.front() >= 0.0)) {
    throw invalid_input_error("grid: times must start at or after 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(std::isfinite(times[i]) && times[i] > times[i - 1])) {
      throw invalid_input_error("grid: times must be finite and strictly increasing");
    }
  }
  GridSpec g;
  g.n_ = times.size() - 1;
  g.times_ = std::move(times);
  g.uniform_ = false;
  return g;
}

double GridSpec::delta() const {
  if (!uniform_) throw invalid_input_error("grid: delta is defined only for uniform grids");
  return delta_;
}

double GridSpec::horizon() const {
  return uniform_ ? static_cast<double>(n_) * delta_ : times_.back() - times_.front();
}

double GridSpec::time(std::size_t i) const {
  if (i > n_) throw invalid_input_error("grid: time index out of range");
  return uniform_ ? static_cast<double>(i) * delta_ : times_[i];
}

}  // namespace gpsm
