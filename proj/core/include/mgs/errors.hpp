#pragma once

#include <stdexcept>
#include <string>

namespace mgs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with the input or the requested operation (CLI exit code 2).
class DomainError : public Error {
 public:
  using Error::Error;
};

class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotInRingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotOrthogonalError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ReflectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotMatchgateError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotCovarianceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NormalizationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class CapError : public DomainError {
 public:
  using DomainError::DomainError;
};

class CapacityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedSizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SolverProcessError : public Error {
 public:
  using Error::Error;
};

// Bug traps: raised when an invariant that the algorithms guarantee fails.
class InternalError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public InternalError {
 public:
  using InternalError::InternalError;
};

}  // namespace mgs
