#pragma once

#include <stdexcept>
#include <string>

namespace kval {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-positive or non-finite kernel/mean hyperparameters.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset, configuration value, or function argument.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed at every rung of the jitter ladder, or the
/// matrix is structurally singular (duplicate noiseless inputs).
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double final_jitter)
      : Error(what), final_jitter_(final_jitter) {}
  double final_jitter() const noexcept { return final_jitter_; }

 private:
  double final_jitter_;
};

/// Covariance that cannot be inverted even after jitter; carries the smallest
/// eigenvalue found.
class SingularCovarianceError : public Error {
 public:
  SingularCovarianceError(const std::string& what, double smallest_eigenvalue)
      : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// A floating-point result fell outside its tolerated range (e.g. a
/// predictive variance more negative than the clipping threshold).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class TrainingFailureError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Beta density evaluated at p = 0 or p = 1.
class BoundaryInputError : public Error {
 public:
  using Error::Error;
};

/// The Beta MLE lies outside the posterior grid; the caller must widen it.
class WidenGridError : public Error {
 public:
  using Error::Error;
};

/// A query point does not fall in any posterior grid cell.
class OutsideGridError : public Error {
 public:
  using Error::Error;
};

class UnsupportedPlotError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kval
