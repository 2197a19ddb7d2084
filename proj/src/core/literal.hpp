#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bcr {

enum class TruthValue { kTrue, kFalse, kPossiblyTrue, kPossiblyFalse, kUnknown };

// Spelling used in domain files and logs: true, false, possibly_true, ...
std::string_view to_string(TruthValue value);
std::optional<TruthValue> parse_truth_value(std::string_view text);

// possibly_true -> true, possibly_false -> false; certain values unchanged.
TruthValue certain(TruthValue value);

inline bool is_certain(TruthValue v) {
  return v == TruthValue::kTrue || v == TruthValue::kFalse;
}

inline bool is_variable(std::string_view term) {
  return !term.empty() && term.front() == '?';
}

/// A predicate applied to a list of terms (instance ids or ?variables).
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  bool is_ground() const;
  /// "On milk counter"
  std::string key() const;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  TruthValue value = TruthValue::kTrue;

  bool is_ground() const { return atom.is_ground(); }
  /// "On(milk,counter)=true"
  std::string to_string() const;

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

}  // namespace bcr
