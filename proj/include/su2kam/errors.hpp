#pragma once

#include <stdexcept>
#include <string>

namespace kam {

/// Base class of every error raised by the library.
class KamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A contract precondition was violated by the caller.
class PreconditionError : public KamError {
 public:
  using KamError::KamError;
};

/// Principal logarithm requested too close to -Id.
class AntipodeError : public KamError {
 public:
  using KamError::KamError;
};

class RationalInput : public KamError {
 public:
  using KamError::KamError;
};

/// A small divisor fell below the underflow threshold on a mode that must be solved.
class DivisorUnderflow : public KamError {
 public:
  using KamError::KamError;
};

/// The step smallness gate c K N^s0 eps0 < 1 does not hold.
class GateFailure : public KamError {
 public:
  using KamError::KamError;
};

class UndersampledGrid : public KamError {
 public:
  using KamError::KamError;
};

/// A map to SU(2) would not be 1-periodic.
class ParityViolation : public KamError {
 public:
  using KamError::KamError;
};

class VerificationFailure : public KamError {
 public:
  using KamError::KamError;
};

class ConfigError : public KamError {
 public:
  using KamError::KamError;
};

}  // namespace kam
