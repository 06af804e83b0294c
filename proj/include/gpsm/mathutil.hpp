#pragma once

#include <cstddef>
#include <cstdint>

namespace gpsm {

inline constexpr double kPi = 3.14159265358979323846;

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), accurate to ~1e-15 relative.
/// Throws invalid_input_error unless 0 < p < 1.
double normal_quantile(double p);

/// log Beta(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace gpsm
