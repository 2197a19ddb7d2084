#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/grounding.hpp"

namespace bcr::prop {

inline constexpr int kCases = 1000;

// Each suite fixes its own seed so a failing case number is reproducible.
class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  uint64_t u64() { return rng_(); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }

  TruthValue value(bool certain_only) {
    static const std::vector<TruthValue> all{TruthValue::kTrue, TruthValue::kFalse,
                                             TruthValue::kPossiblyTrue, TruthValue::kPossiblyFalse};
    return all[static_cast<size_t>(range(0, certain_only ? 1 : 3))];
  }

  std::string name(const std::string& prefix) {
    static const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789_";
    std::string s = prefix;
    const int n = range(0, 6);
    for (int i = 0; i < n; ++i) s += chars[static_cast<size_t>(range(0, static_cast<int>(chars.size()) - 1))];
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<std::string> ids_of(const InstanceTable& t, const CategorySet& slot) {
  std::vector<std::string> out;
  for (const auto& [id, cat] : t)
    if (accepts(slot, cat)) out.push_back(id);
  return out;
}

}  // namespace bcr::prop
