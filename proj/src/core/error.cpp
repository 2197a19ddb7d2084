#include "core/error.hpp"

namespace bcr {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingBinding: return "MissingBinding";
    case ErrorCode::kCategoryMismatch: return "CategoryMismatch";
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownPredicate: return "UnknownPredicate";
    case ErrorCode::kUnknownInstance: return "UnknownInstance";
    case ErrorCode::kUnknownSchema: return "UnknownSchema";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kNoAchiever: return "NoAchiever";
    case ErrorCode::kNotALeaf: return "NotALeaf";
    case ErrorCode::kSelectionExhausted: return "SelectionExhausted";
    case ErrorCode::kTransport: return "TransportError";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kUnsolvable: return "Unsolvable";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace bcr
