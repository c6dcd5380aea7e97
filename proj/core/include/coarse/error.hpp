#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

enum class ErrorCode {
  kUnknownVertex,
  kInvalidArgument,
  kUntrusted,
  kPrecondition,
  kBudgetExceeded,
  kNotAGroup,
  kFormat,
  kHashMismatch,
  kRegistry,
  kInternal,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code so
// the CLI and the harness can map it to exit statuses and verdicts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coarse
