#pragma once

#include <stdexcept>
#include <string>

namespace cmemnn {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tensor shape or rank mismatch. Message names the offending shapes.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid or inconsistent configuration (file or programmatic).
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed or insufficient input data.
struct DataError : Error {
  using Error::Error;
};

/// Checkpoint file cannot be read back (version, shape, truncation).
struct CheckpointError : Error {
  using Error::Error;
};

/// Numerical failure: NaN loss, failed gradient check, undefined metric.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace cmemnn
