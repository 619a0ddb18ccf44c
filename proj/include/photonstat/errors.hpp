#pragma once

#include <stdexcept>
#include <string>

namespace photonstat {

/// Invalid user-supplied parameters (bad drive spec, malformed config).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical tolerance was not met: insufficient cutoff, failed
/// convergence check, negative probability beyond clamping tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace photonstat
