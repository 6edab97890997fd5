#pragma once

// Fragment classification of a normalized instance.

#include "notcontains/flatsolver.hpp"

namespace notcontains {

enum class Fragment { EasyLengthSat, NeedleOnlyNonFlatSat, EasyAllFlat, HardTwoSided, HardHaystackOnly };

inline const char* to_string(Fragment f) {
  switch (f) {
    case Fragment::EasyLengthSat: return "easy-length-sat";
    case Fragment::NeedleOnlyNonFlatSat: return "needle-only-nonflat-sat";
    case Fragment::EasyAllFlat: return "easy-all-flat";
    case Fragment::HardTwoSided: return "hard-two-sided";
    case Fragment::HardHaystackOnly: return "hard-haystack-only";
  }
  return "";
}

struct Classification {
  Fragment fragment = Fragment::EasyAllFlat;
  std::optional<Assignment> model;  // for the two SAT fragments
};

/// First match in order: length-abstraction witness; an infinite variable
/// only in the needle (pumped); all flat; a non-flat variable on both sides;
/// otherwise non-flat variables occur only in the haystack.
inline Classification classify(const Instance& inst) {
  if (auto m = length_abstraction(inst)) return {Fragment::EasyLengthSat, std::move(m)};

  const auto in_needle = term_vars(inst.needle);
  const auto in_haystack = term_vars(inst.haystack);
  for (const auto& x : in_needle) {
    if (in_haystack.contains(x) || is_finite_language(inst.lang(x))) continue;
    Assignment sigma;
    for (const auto& y : inst.occurring_vars()) sigma[y] = shortest_word(inst.lang(y));
    const auto ls = length_set(inst.lang(x));
    const std::size_t target = evaluate(inst.haystack, sigma).size() + 1;
    sigma[x] = *lex_least_word_of_length(inst.lang(x), *ls.least_at_least(target));
    return {Fragment::NeedleOnlyNonFlatSat, std::move(sigma)};
  }

  bool all_flat = true;
  bool two_sided = false;
  for (const auto& x : inst.occurring_vars()) {
    if (is_flat(classify_flatness(inst.lang(x)))) continue;
    all_flat = false;
    two_sided |= in_needle.contains(x) && in_haystack.contains(x);
  }
  if (all_flat) return {Fragment::EasyAllFlat, std::nullopt};
  return {two_sided ? Fragment::HardTwoSided : Fragment::HardHaystackOnly, std::nullopt};
}

}  // namespace notcontains
