// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lse {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (violated invariant, non-divisible domain, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point or argument lies outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Wrong number of samples, coordinates or vertices.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Level or index outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked on an object in the wrong state (e.g. missing approximant).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Mesh or checkpoint failed structural validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Requested feature is not available for the given dimension or format.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace lse
