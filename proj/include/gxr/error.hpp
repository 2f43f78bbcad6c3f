#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gxr {

/// Root of every exception thrown by the library. `kind()` is a stable
/// machine-readable name used by the command-line front end.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define GXR_DEFINE_ERROR(Name, Base)                                   \
  class Name : public Base {                                           \
   public:                                                             \
    using Base::Base;                                                  \
    const char* kind() const noexcept override { return #Name; }       \
  };

// Malformed input text or files.
GXR_DEFINE_ERROR(ParseError, Error)
GXR_DEFINE_ERROR(FormatError, ParseError)
GXR_DEFINE_ERROR(RepeatBoundsError, ParseError)
GXR_DEFINE_ERROR(OrderCycleError, ParseError)

// Structurally invalid graphs and references into graphs.
GXR_DEFINE_ERROR(InvalidGraph, Error)
GXR_DEFINE_ERROR(UnknownFact, Error)
GXR_DEFINE_ERROR(UnknownNode, Error)

GXR_DEFINE_ERROR(IoError, Error)
GXR_DEFINE_ERROR(ParameterMismatch, Error)
GXR_DEFINE_ERROR(ArithmeticOverflow, Error)
GXR_DEFINE_ERROR(FragmentError, Error)
GXR_DEFINE_ERROR(InstanceTooLarge, Error)
GXR_DEFINE_ERROR(ModeUnsound, Error)
GXR_DEFINE_ERROR(UnsupportedCriterion, Error)

// Reduction generators and brute-force oracles.
GXR_DEFINE_ERROR(BadArity, Error)
GXR_DEFINE_ERROR(NonMonotoneSatSequence, Error)
GXR_DEFINE_ERROR(TooManyVars, Error)

#undef GXR_DEFINE_ERROR

/// Expression syntax error carrying the byte offset where it was detected.
class SyntaxError : public ParseError {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : ParseError(message + " at offset " + std::to_string(position)),
        detail_(message),
        position_(position) {}
  const char* kind() const noexcept override { return "SyntaxError"; }
  std::size_t position() const noexcept { return position_; }
  /// The message without the offset suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t position_;
};

}  // namespace gxr
