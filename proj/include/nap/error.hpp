#pragma once

#include <stdexcept>
#include <string>

namespace nap {

// Root of the library's exception hierarchy. The CLI maps each subclass to an
// exit code: ConfigError -> 1, DataError -> 2, NumericError -> 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on a hyperparameter.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed or unusable input data.
class DataError : public Error {
public:
  using Error::Error;
};

/// Training diverged or produced a non-finite value.
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace nap
