#pragma once

#include <stdexcept>
#include <string>

namespace densitrace {

/// Base class for all densitrace errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCharacter : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// First/last bit of an observed substring does not match the target k-mer.
class EndpointMismatch : public Error {
 public:
  using Error::Error;
};

/// k-mer shorter than 2; the interior (and everything built on it) is undefined.
class KTooSmall : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration request exceeds its hard guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyTraceSet : public Error {
 public:
  using Error::Error;
};

class EmptyDeck : public Error {
 public:
  using Error::Error;
};

class InvalidP : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class RepeatDetected : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class SolveFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or unwritable output path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace densitrace
