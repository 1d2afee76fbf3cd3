// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gradfis {

/// Base class for all gradfis errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters: sizes, hyperparameters, flag values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or missing input data: files, labels, non-finite feature values.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Dimension disagreement between a model and its input.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Internal inconsistency of a model, e.g. an antecedent index out of range.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced during numeric computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or network failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gradfis
