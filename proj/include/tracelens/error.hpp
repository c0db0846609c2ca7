#pragma once

#include <stdexcept>
#include <string>

namespace tracelens {

// Error taxonomy shared across the library. The CLI maps kinds onto exit
// codes: input-data errors -> 2, configuration/taxonomy errors -> 3.
enum class ErrorKind {
  MalformedInput,
  UnknownField,
  UnmatchedSpan,
  PartialOverlap,
  NegativeTime,
  NegativeSelf,
  Overflow,
  ShapeMismatch,
  BadPattern,
  UndeclaredCategory,
  DuplicateCategory,
  MixedTaxonomy,
  EmptyBreakdown,
  WrongTaxonomy,
  UnsupportedFormat,
  ZeroWallTime,
  BadArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::UnmatchedSpan: return "UnmatchedSpan";
    case ErrorKind::PartialOverlap: return "PartialOverlap";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::NegativeSelf: return "NegativeSelf";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BadPattern: return "BadPattern";
    case ErrorKind::UndeclaredCategory: return "UndeclaredCategory";
    case ErrorKind::DuplicateCategory: return "DuplicateCategory";
    case ErrorKind::MixedTaxonomy: return "MixedTaxonomy";
    case ErrorKind::EmptyBreakdown: return "EmptyBreakdown";
    case ErrorKind::WrongTaxonomy: return "WrongTaxonomy";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::ZeroWallTime: return "ZeroWallTime";
    case ErrorKind::BadArgument: return "BadArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // True for errors caused by the input data rather than configuration.
  bool is_input_error() const {
    switch (kind_) {
      case ErrorKind::MalformedInput:
      case ErrorKind::UnknownField:
      case ErrorKind::UnmatchedSpan:
      case ErrorKind::PartialOverlap:
      case ErrorKind::NegativeTime:
      case ErrorKind::NegativeSelf:
      case ErrorKind::Overflow:
      case ErrorKind::ShapeMismatch:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace tracelens
