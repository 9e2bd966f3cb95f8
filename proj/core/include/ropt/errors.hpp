#pragma once

#include <stdexcept>
#include <string>

namespace ropt {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid constructor or function argument (bad sizes, bad options).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Operands do not have the shape the manifold expects.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A normalization-based retraction hit a zero column/row/vector.
class DegenerateStepError : public Error {
 public:
  using Error::Error;
};

/// Truncated SVD lost rank during a fixed-rank retraction.
class RankCollapseError : public Error {
 public:
  using Error::Error;
};

/// The manifold does not implement the requested operation.
class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

/// A problem lacks a derivative that the caller requires.
class MissingDerivativeError : public Error {
 public:
  using Error::Error;
};

/// A user callable (cost, gradient, ...) threw; message carries context.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the offending line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ropt
