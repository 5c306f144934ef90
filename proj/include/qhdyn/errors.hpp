#pragma once

#include <stdexcept>
#include <string>

namespace qhdyn {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kCheckFailure = 1,
  kConfigError = 2,
  kNumericalDomain = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Malformed scenario, invalid model parameters, bad CLI input.
class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
};

/// The mathematics broke down: the construction is not defined for this input.
class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericalDomain; }
};

/// Non-diagonalizable or near-defective matrix (coalescing eigenvectors).
class ExceptionalPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ComplexSpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Metric lost positivity or became too ill-conditioned to be meaningful.
class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenpairs of adjacent frames cannot be matched to a unique permutation.
class AmbiguousMatchingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A zero dressing coefficient, or a singular map.
class SingularMapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite or overflowing state during integration.
class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Analytic-only derivative requested for a model whose Hamiltonian is scheduled.
class InconsistentModeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace qhdyn
