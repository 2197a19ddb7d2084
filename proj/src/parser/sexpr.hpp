#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/error.hpp"

namespace bcr::parser {

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& expected)
      : Error(ErrorCode::kSyntax, "line " + std::to_string(pos.line) +
                                      ", column " + std::to_string(pos.column) +
                                      ": expected " + expected),
        pos_(pos),
        expected_(expected) {}

  SourcePos pos() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string expected_;
};

struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
};

/// Reads exactly one top-level expression; trailing non-whitespace is an
/// error. `;` starts a comment running to end of line.
SExpr read_sexpr(std::string_view text);

}  // namespace bcr::parser
