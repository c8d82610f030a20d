#pragma once

#include <stdexcept>
#include <string>

namespace wigstat {

// Malformed experiment configuration or an unknown catalog token.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver non-convergence, non-finite quadrature values and similar.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wigstat
