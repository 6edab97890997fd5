#pragma once

// Model verification and the bounded brute-force oracle.

#include "notcontains/constraints.hpp"

namespace notcontains {

inline bool verify_model(const Instance& inst, const Assignment& model) {
  try {
    return satisfies(inst, model);
  } catch (const Error&) {
    return false;
  }
}

enum class OracleStatus { Sat, NoneAtBound, ExhaustedUnsat };

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Sat: return "sat";
    case OracleStatus::NoneAtBound: return "none-at-bound";
    case OracleStatus::ExhaustedUnsat: return "exhausted-unsat";
  }
  return "";
}

struct OracleResult {
  OracleStatus status = OracleStatus::NoneAtBound;
  Assignment model;
  bool capped = false;
};

/// Tries every assignment with |sigma(x)| <= len_bound, variables in name
/// order (first slowest) and words in length-then-lex order. Stops after
/// `cap` assignments and reports NoneAtBound with `capped` set.
inline OracleResult brute_oracle(const Instance& inst, std::size_t len_bound,
                                 std::size_t cap = static_cast<std::size_t>(-1)) {
  const auto var_set = inst.occurring_vars();
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::vector<std::vector<Word>> words;
  bool exhaustive = true;
  for (const auto& x : vars) {
    const Dfa& d = inst.lang(x);
    words.push_back(enumerate_words(d, len_bound));
    // A finite trim DFA has no word longer than its state count.
    if (!is_finite_language(d) || enumerate_words(d, std::max(len_bound, d.size())).size() != words.back().size()) {
      exhaustive = false;
    }
  }
  OracleResult result;
  auto fill_unused = [&](Assignment& m) {
    for (const auto& [x, d] : inst.langs) {
      if (!m.contains(x)) m[x] = shortest_word(d);
    }
  };
  for (const auto& ws : words) {
    if (ws.empty()) {
      result.status = exhaustive ? OracleStatus::ExhaustedUnsat : OracleStatus::NoneAtBound;
      return result;
    }
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  Assignment sigma;
  std::size_t tried = 0;
  while (true) {
    if (tried++ >= cap) {
      result.capped = true;
      return result;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i]] = words[i][idx[i]];
    if (!is_factor(evaluate(inst.needle, sigma), evaluate(inst.haystack, sigma))) {
      result.status = OracleStatus::Sat;
      result.model = sigma;
      fill_unused(result.model);
      return result;
    }
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == words[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  result.status = exhaustive ? OracleStatus::ExhaustedUnsat : OracleStatus::NoneAtBound;
  return result;
}

}  // namespace notcontains
