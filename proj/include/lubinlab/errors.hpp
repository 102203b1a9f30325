#pragma once

#include <stdexcept>
#include <string>

namespace lubinlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LUBINLAB_ERROR(Name)            \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

LUBINLAB_ERROR(PrimeMismatch)
LUBINLAB_ERROR(PrecisionExhausted)
LUBINLAB_ERROR(DivisionByZeroToPrecision)
LUBINLAB_ERROR(DomainError)
LUBINLAB_ERROR(ConstantTermError)
LUBINLAB_ERROR(NotInvertible)
LUBINLAB_ERROR(TruncationInconclusive)
LUBINLAB_ERROR(NoStabilization)
LUBINLAB_ERROR(TorsionDetected)
LUBINLAB_ERROR(IntegralityFailure)
LUBINLAB_ERROR(NonUniqueLift)
LUBINLAB_ERROR(NoCandidate)
LUBINLAB_ERROR(AmbiguousAtPrecision)

#undef LUBINLAB_ERROR

/// Input text that could not be parsed; carries a 1-based position, or
/// line 0 when only the offending field is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace lubinlab
