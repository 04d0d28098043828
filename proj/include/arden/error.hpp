#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arden {

enum class ErrorKind {
  SingularSystem,
  NotPositiveDefinite,
  NonFinite,
  NoConvergence,
  HorizonTooShort,
  NotConjugateClosed,
  PathTooShort,
  EmbeddingTooShort,
  ZeroNormReference,
  IndexOutOfRange,
  InvalidArgument,
  ParseError,
  RaggedRows,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  // True for failures of the linear algebra rather than of the inputs.
  bool is_numerical() const noexcept;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

}  // namespace arden
