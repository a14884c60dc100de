#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace durnet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multiset difference where the subtrahend is not contained in the minuend.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

// A count or time-stamp left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A value outside an operation's domain (e.g. a shift producing a negative stamp).
class DomainError : public Error {
 public:
  using Error::Error;
};

class StaleInstanceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSemanticsError : public Error {
 public:
  using Error::Error;
};

class NameCollisionError : public Error {
 public:
  using Error::Error;
};

// Net or machine violates a structural invariant (zero duration, empty pre-set, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IllegalMoveError : public Error {
 public:
  using Error::Error;
};

// Exploration exceeded a configured budget. Never conflated with an "unknown" verdict.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// A marking does not have the shape of a compiled counter-machine marking.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A strategy was queried at a position it is not defined for.
class OffScriptError : public Error {
 public:
  using Error::Error;
};

// The Duplicator proof strategy could not produce the response its case table
// prescribes although legal responses exist. Indicates a bug, not a lost game.
class ImpossibleResponseError : public Error {
 public:
  using Error::Error;
};

struct SourceSpan {
  std::string file;
  std::size_t line = 0;          // 1-based
  std::size_t column_begin = 0;  // 1-based, inclusive
  std::size_t column_end = 0;    // 1-based, exclusive

  std::string to_string() const;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message);

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

}  // namespace durnet
