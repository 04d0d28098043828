#include "arden/error.hpp"

namespace arden {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::NotConjugateClosed: return "NotConjugateClosed";
    case ErrorKind::PathTooShort: return "PathTooShort";
    case ErrorKind::EmbeddingTooShort: return "EmbeddingTooShort";
    case ErrorKind::ZeroNormReference: return "ZeroNormReference";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

bool Error::is_numerical() const noexcept {
  switch (kind_) {
    case ErrorKind::SingularSystem:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NoConvergence:
      return true;
    default:
      return false;
  }
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace arden
