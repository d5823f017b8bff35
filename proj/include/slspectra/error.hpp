#pragma once

#include <stdexcept>
#include <string>

namespace slspectra {

/// Invalid input: inadmissible boundary parameter, malformed potential file,
/// out-of-range option. Maps to exit status 2 / SL_ERR_CONFIG.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that did not converge or could not certify its result.
/// Maps to exit status 1 / SL_ERR_NUMERIC.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step-size underflow in the ODE integrator.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double last_x)
      : NumericalError(what), last_x_(last_x) {}
  double last_x() const noexcept { return last_x_; }

 private:
  double last_x_;
};

}  // namespace slspectra
