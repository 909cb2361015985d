#pragma once

#include <stdexcept>
#include <string>

namespace rftr {

enum class ErrorCode {
  kParse,
  kValidation,
  kRange,
  kNoSuchNode,
  kChannelBusy,
  kLinkDown,
  kNotOwner,
  kAlreadyFree,
  kUnknownSequence,
  kDuplicateFeedback,
  kUndefinedMetric,
  kIo,
};

const char* to_string(ErrorCode code);

// All recoverable failures in the library surface as rftr::Error; the code
// lets callers and tests branch without matching on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rftr
