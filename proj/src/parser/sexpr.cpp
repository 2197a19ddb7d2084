#include "parser/sexpr.hpp"

#include <cctype>

namespace bcr::parser {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip_blank();
    if (at_end()) throw ParseError(pos_, "'('");
    SExpr e = read();
    skip_blank();
    if (!at_end()) throw ParseError(pos_, "end of input");
    return e;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return text_[i_]; }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.pos = pos_;
    if (peek() == ')') throw ParseError(pos_, "expression");
    if (peek() != '(') {
      e.symbol = read_symbol();
      return e;
    }
    e.is_list = true;
    advance();
    for (;;) {
      skip_blank();
      if (at_end()) throw ParseError(pos_, "')'");
      if (peek() == ')') {
        advance();
        return e;
      }
      if (++depth_ > kMaxDepth) throw ParseError(pos_, "shallower nesting");
      e.items.push_back(read());
      --depth_;
    }
  }

  std::string read_symbol() {
    std::string out;
    while (!at_end()) {
      const char c = peek();
      if (c == '(' || c == ')' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      out += c;
      advance();
    }
    return out;
  }

  static constexpr int kMaxDepth = 256;
  std::string_view text_;
  size_t i_ = 0;
  int depth_ = 0;
  SourcePos pos_;
};

}  // namespace

SExpr read_sexpr(std::string_view text) { return Reader(text).read_top(); }

}  // namespace bcr::parser
