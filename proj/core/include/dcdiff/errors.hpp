#pragma once

#include <stdexcept>
#include <string>

namespace dcdiff {

/// Invalid argument to a library call (bad index, non-unit direction, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration that cannot be honoured (e.g. K_max beyond quadrature resolution).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical parameters outside the admitted range (|Z| >= sqrt(3)/2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Discretization does not resolve the requested quantity.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Breakdown inside a numerical kernel (factorization, eigensolver).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing upstream artifact for a pipeline stage.
class DependencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dcdiff
