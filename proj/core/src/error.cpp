#include "cshc/error.hpp"

namespace cshc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAllZero: return "AllZero";
    case ErrorKind::kUnknownVariable: return "UnknownVariable";
    case ErrorKind::kOverlappingSets: return "OverlappingSets";
    case ErrorKind::kZeroContext: return "ZeroContext";
    case ErrorKind::kNotPositive: return "NotPositive";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kBadContext: return "BadContext";
    case ErrorKind::kPreconditionFailed: return "PreconditionFailed";
    case ErrorKind::kNotGraphIsomorph: return "NotGraphIsomorph";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace cshc
