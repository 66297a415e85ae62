#pragma once

#include <stdexcept>
#include <string>

namespace aoicache {

/// Argument outside the mathematical domain of an operation (e.g. t <= 0 for g).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid construction parameters or mismatched inputs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to bracket, converge, or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoicache

namespace aoicache {

/// Malformed configuration text or an unknown override key.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace aoicache
