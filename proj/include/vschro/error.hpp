#pragma once

#include <stdexcept>
#include <string>

namespace vschro {

/// Base class for all library failures that are not plain argument errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Solver non-convergence, overflow, breakdown near the spectrum.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace vschro
