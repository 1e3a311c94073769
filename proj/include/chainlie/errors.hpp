#pragma once

#include <stdexcept>
#include <string>

namespace chainlie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CHAINLIE_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  };

CHAINLIE_DEFINE_ERROR(DegreeMismatch)
CHAINLIE_DEFINE_ERROR(Inhomogeneous)
CHAINLIE_DEFINE_ERROR(ZeroExpr)
CHAINLIE_DEFINE_ERROR(ValidationError)
CHAINLIE_DEFINE_ERROR(OverlapOutOfRange)
CHAINLIE_DEFINE_ERROR(DomainViolation)
CHAINLIE_DEFINE_ERROR(SeedDegenerate)
CHAINLIE_DEFINE_ERROR(NoIndependentPath)
CHAINLIE_DEFINE_ERROR(ArityMismatch)
CHAINLIE_DEFINE_ERROR(UnknownPair)
CHAINLIE_DEFINE_ERROR(SharedMismatch)
CHAINLIE_DEFINE_ERROR(DimensionMismatch)

#undef CHAINLIE_DEFINE_ERROR

/// Syntax error in a text document; carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace chainlie
