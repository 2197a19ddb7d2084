#pragma once

#include <stdexcept>
#include <string>

namespace bcr {

enum class ErrorCode {
  kMissingBinding,
  kCategoryMismatch,
  kSyntax,
  kValidation,
  kUnknownPredicate,
  kUnknownInstance,
  kUnknownSchema,
  kArityMismatch,
  kNoAchiever,
  kNotALeaf,
  kSelectionExhausted,
  kTransport,
  kUnknownTask,
  kUnsolvable,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code);

// All recoverable failures in the library are reported with this type; the
// code is what the C API hands back to callers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bcr
