#pragma once

#include <stdexcept>
#include <string>

namespace btrank {

// Base of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A record compares an object with itself.
class SelfComparisonError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Accumulated win counts exceeded the 64-bit range.
class CountOverflowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class MaxIterationsError : public Error {
 public:
  using Error::Error;
};

// Constraint vector with 1^T alpha ~ 0: a constant can still be added to all
// scores, so the fit is not identifiable.
class DegenerateConstraintError : public Error {
 public:
  using Error::Error;
};

class NonPositiveWError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

// Matrix fails the M * 1 = 0 precondition of the known-kernel pseudoinverse.
class KernelMismatchError : public Error {
 public:
  using Error::Error;
};

// More than one eigenvalue sits below the rank threshold; for a Hessian this
// signals a disconnected comparison graph.
class KernelTooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace btrank
