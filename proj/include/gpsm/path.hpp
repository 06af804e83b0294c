#pragma once

#include <cstddef>
#include <vector>

#include "gpsm/rng.hpp"

namespace gpsm {

/// Observation grid t_0 < t_1 < ... < t_n.  Uniform grids are t_i = i*delta
/// with horizon T = n*delta; explicit time lists are also accepted
/// (strictly increasing, t_0 >= 0).
class GridSpec {
 public:
  static GridSpec uniform(std::size_t n, double delta);
  static GridSpec at_times(std::vector<double> times);

  bool is_uniform() const { return uniform_; }
  /// Number of steps n; grids carry n + 1 points including t_0.
  std::size_t steps() const { return n_; }
  std::size_t point_count() const { return n_ + 1; }
  /// Step size; only valid for uniform grids.
  double delta() const;
  /// Observation span t_n - t_0.
  double horizon() const;
  double time(std::size_t i) const;

 private:
  GridSpec() = default;
  std::size_t n_ = 0;
  double delta_ = 0.0;
  std::vector<double> times_;  // empty for uniform grids
  bool uniform_ = true;
};

enum class PathKind { stationary, fbm, fou1, fou2 };

/// One sampled trajectory: a value for every grid point, t_0 included.
struct Path {
  GridSpec grid;
  std::vector<double> values;
  PathKind kind = PathKind::stationary;
  SeedSpec seed;
};

}  // namespace gpsm
