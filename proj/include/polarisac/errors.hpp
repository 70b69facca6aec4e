#pragma once

#include <stdexcept>
#include <string>

namespace polarisac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or input file content. Messages name the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A size is zero or two blocks disagree in shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A scenario cannot be built (e.g. a link without any propagation path).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// Retraction would have to normalize a zero block.
class DegenerateRetraction : public Error {
 public:
  using Error::Error;
};

/// Armijo backtracking exhausted its budget without sufficient decrease.
class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace polarisac
