#pragma once

#include <stdexcept>
#include <string>

namespace mblbfgs {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Vector length mismatch.
class DimensionError : public Error {
public:
  using Error::Error;
};

class SamplingError : public Error {
public:
  using Error::Error;
};

// Invalid hyperparameters or sizes, raised before any compute.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Non-finite values produced during training or evaluation.
class NumericError : public Error {
public:
  using Error::Error;
};

// A stored curvature pair has a non-finite rho.
class CorruptStoreError : public NumericError {
public:
  using NumericError::NumericError;
};

class DataError : public Error {
public:
  using Error::Error;
};

class MetricError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace mblbfgs
