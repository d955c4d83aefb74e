#pragma once

#include <stdexcept>
#include <string>

namespace etale {

// Root of everything the library throws. Axiom violations are not errors;
// they come back as Report values from the validate_* functions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RingMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when an operation needs echelon forms but the ring is Z/m with m
// composite.
class UnsupportedRing : public Error {
 public:
  using Error::Error;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace etale
