#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgepost {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by its arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exact integer result does not fit in 64 bits.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A size guard refused the request (node cap, oracle or naive-transform limit,
/// counting-table limit).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must describe the same node set do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  enum class Kind {
    missing_header,
    malformed_header,
    malformed_row,
    non_integer,
    negative_value,
    ragged_row,
    value_exceeds_arity,
    bad_document,
  };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

}  // namespace edgepost
