#pragma once

#include <stdexcept>
#include <string>

namespace uconvex {

// Invalid input to an operation: bad dimensions, out-of-range exponents,
// malformed measures.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Geodesic requested through a configuration the space does not support,
// e.g. cone points whose base angle reaches pi.
class UnsupportedGeodesic : public DomainError {
 public:
  using DomainError::DomainError;
};

// Bad command-line or file configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uconvex
