#pragma once

#include <stdexcept>
#include <string>

namespace dsig {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (bad flag values, empty selections).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data, I/O failures, out-of-range queries.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic breakdown: degenerate statistics, divergent optimisation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsig
