#pragma once

#include <stdexcept>
#include <string>

namespace gpsm {

/// Bad user-supplied value (parameter out of range, malformed config, ...).
/// The command line maps this to exit code 1.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: quadrature that never reached its tolerance, an
/// indefinite covariance, an overflowing transform.  Exit code 2.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance sequence has no nonnegative circulant embedding at the
/// requested size.  Callers may fall back to a dense factorization.
class not_embeddable_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

/// Filesystem or parse failure on external files.  Exit code 3.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gpsm
