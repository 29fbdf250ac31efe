#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hgv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index (vertex, qubit) outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (qubits, enumeration, oracle dimension) was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Protocol parameters are too large to execute within the register budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant (normalization, probability) broke down.
class NumericalError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  kMalformedLine,
  kVertexOutOfRange,
  kBadCardinality,
  kDuplicateEdge,
  kMissingHeader,
};

inline const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kMalformedLine:
      return "malformed line";
    case ParseErrorKind::kVertexOutOfRange:
      return "vertex out of range";
    case ParseErrorKind::kBadCardinality:
      return "edge cardinality must be 2 or 3";
    case ParseErrorKind::kDuplicateEdge:
      return "duplicate edge";
    case ParseErrorKind::kMissingHeader:
      return "missing vertex count";
  }
  return "unknown parse error";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : Error("line " + std::to_string(line) + ": " + to_string(kind) +
              (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  /// 1-based line number in the input text.
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace hgv
