#include "core/literal.hpp"

#include <algorithm>

namespace bcr {

std::string_view to_string(TruthValue value) {
  switch (value) {
    case TruthValue::kTrue: return "true";
    case TruthValue::kFalse: return "false";
    case TruthValue::kPossiblyTrue: return "possibly_true";
    case TruthValue::kPossiblyFalse: return "possibly_false";
    case TruthValue::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<TruthValue> parse_truth_value(std::string_view text) {
  if (text == "true") return TruthValue::kTrue;
  if (text == "false") return TruthValue::kFalse;
  if (text == "possibly_true") return TruthValue::kPossiblyTrue;
  if (text == "possibly_false") return TruthValue::kPossiblyFalse;
  if (text == "unknown") return TruthValue::kUnknown;
  return std::nullopt;
}

TruthValue certain(TruthValue value) {
  if (value == TruthValue::kPossiblyTrue) return TruthValue::kTrue;
  if (value == TruthValue::kPossiblyFalse) return TruthValue::kFalse;
  return value;
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const std::string& a) { return is_variable(a); });
}

std::string Atom::key() const {
  std::string out = predicate;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

std::string Literal::to_string() const {
  std::string out = atom.predicate + "(";
  for (size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i];
  }
  out += ")=";
  out += bcr::to_string(value);
  return out;
}

}  // namespace bcr
