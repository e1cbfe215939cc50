#pragma once

#include <stdexcept>
#include <string>

namespace thdsim {

// Base class for all library errors.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid arguments, bad configuration, violated preconditions.
// CLI exit code 2.
class ConfigError : public Error {
  using Error::Error;
};

// Numerical accuracy failures and degenerate data detected at runtime.
// CLI exit code 3.
class NumericalError : public Error {
  using Error::Error;
};

class GridMismatchError : public ConfigError {
  using ConfigError::ConfigError;
};

class DegenerateDistributionError : public NumericalError {
  using NumericalError::NumericalError;
};

class NoSignalError : public NumericalError {
  using NumericalError::NumericalError;
};

class DegenerateLikelihoodError : public NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace thdsim
