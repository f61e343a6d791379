#pragma once

#include <stdexcept>
#include <string>

namespace mtilt {

// Base class for all library failures so callers can map them to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed arguments: bad sizes, non-finite values, out-of-domain parameters.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Operation asked of a model family that cannot support it.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

// Valid model, but the requested mode does not apply (e.g. root finding on a
// history-dependent drift).
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

// Tilt parameter outside the range the theory licenses.
class TiltRangeError : public Error {
 public:
  using Error::Error;
};

// Work unit too large for the exact backend (enumeration width, etc).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Result too noisy to be useful at the requested tolerance.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtilt
