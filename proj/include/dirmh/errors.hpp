#pragma once

#include <stdexcept>
#include <string>

namespace dirmh {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gradient vector handed to the proposal machinery contains NaN/Inf.
class InvalidGradient : public Error {
 public:
  using Error::Error;
};

// A dense covariance was requested for a degenerate (near-zero) gradient.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

// Covariance supplied for a Gaussian target is not symmetric positive definite.
class InvalidCovariance : public Error {
 public:
  using Error::Error;
};

// Chain start point has non-finite target log density.
class InvalidStart : public Error {
 public:
  using Error::Error;
};

// Batch index passed to the adaptation schedule is < 1.
class InvalidBatchIndex : public Error {
 public:
  using Error::Error;
};

// Series with zero variance passed to an autocorrelation-based estimator.
class ConstantSeries : public Error {
 public:
  using Error::Error;
};

// Not enough observations for the requested estimator (e.g. < 2 batches).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A covariance estimate required by mESS is singular or non-finite.
class SingularEstimate : public Error {
 public:
  using Error::Error;
};

// The Gram-Schmidt reference construction failed to produce a basis.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure while reading or writing experiment artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration; carries the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dirmh
