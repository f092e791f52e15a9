#ifndef CSHC_ERROR_HPP_
#define CSHC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cshc {

enum class ErrorKind {
  kAllZero,
  kUnknownVariable,
  kOverlappingSets,
  kZeroContext,
  kNotPositive,
  kCapExceeded,
  kParseError,
  kBadContext,
  kPreconditionFailed,
  kNotGraphIsomorph,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cshc

#endif  // CSHC_ERROR_HPP_
