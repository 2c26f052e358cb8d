#pragma once

#include <stdexcept>
#include <string>

namespace scorelab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, malformed specs or files. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numeric or convergence failure at runtime. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DensityZeroAtPoint : public NumericError {
 public:
  explicit DensityZeroAtPoint(double x)
      : NumericError("density is zero at x = " + std::to_string(x) +
                     "; log-derivatives undefined") {}
};

class InvalidWeights : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidOrder : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidCoefficient : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MissingPartials : public NumericError {
 public:
  using NumericError::NumericError;
};

class RecoveryResidualLarge : public NumericError {
 public:
  using NumericError::NumericError;
};

class QuadratureNonconvergent : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateNorm : public NumericError {
 public:
  using NumericError::NumericError;
};

class InsufficientTraining : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularRegression : public NumericError {
 public:
  using NumericError::NumericError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InconsistentEnsembleSize : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateEnsemble : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace scorelab
