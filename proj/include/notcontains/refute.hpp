#pragma once

// Cheap exact checks that settle some instances before the heavy pipeline:
// a syntactic containment test and an automaton check for ground needles.

#include <deque>

#include "notcontains/constraints.hpp"

namespace notcontains {

/// True when the needle, read as a token sequence (letters and variable
/// names), occurs contiguously in the haystack's token sequence. Then
/// sigma(N) is a factor of sigma(H) under every assignment.
inline bool syntactically_contained(const Term& needle, const Term& haystack) {
  using Token = std::pair<std::ptrdiff_t, std::string>;  // letter id, or -1 and a name
  auto tokens = [](const Term& t) {
    std::vector<Token> out;
    for (const auto& item : t) {
      if (is_var(item)) {
        out.emplace_back(-1, var_name(item));
      } else {
        for (Symbol a : lit_word(item)) out.emplace_back(static_cast<std::ptrdiff_t>(a), "");
      }
    }
    return out;
  };
  const auto n = tokens(needle);
  const auto h = tokens(haystack);
  return std::search(h.begin(), h.end(), n.begin(), n.end()) != h.end();
}

struct GroundNeedleCheck {
  /// Every haystack word (occurrences treated independently) contains the needle.
  bool refuted = false;
  /// A satisfying model, when one could be read off the avoiding word.
  std::optional<Assignment> model;
};

/// For a variable-free needle n: searches the haystack language, with every
/// variable occurrence ranging independently over its language, for a word
/// avoiding n. No such word means UNSAT. A word whose occurrences of each
/// variable agree is a model.
inline GroundNeedleCheck check_ground_needle(const Instance& inst) {
  if (!is_ground(inst.needle)) throw Error("check_ground_needle: needle has variables");
  const Word n = evaluate(inst.needle, {});
  GroundNeedleCheck result;
  if (n.empty()) {
    result.refuted = true;
    return result;
  }

  // Haystack NFA; tag[q] is the variable occurrence owning state q, or -1.
  Nfa nfa;
  std::vector<std::ptrdiff_t> tag;
  std::vector<std::string> occ_var;
  auto add = [&](std::ptrdiff_t t) {
    tag.push_back(t);
    return nfa.add_state();
  };
  State cur = add(-1);
  nfa.add_initial(cur);
  for (const auto& item : inst.haystack) {
    if (is_var(item)) {
      const Dfa& dfa = inst.lang(var_name(item));
      const auto idx = static_cast<std::ptrdiff_t>(occ_var.size());
      occ_var.push_back(var_name(item));
      State offset = nfa.embed(to_nfa(dfa));
      tag.resize(nfa.size(), idx);
      State end = add(-1);
      nfa.add_epsilon(cur, offset + dfa.initial());
      for (State f : dfa.final_states()) nfa.add_epsilon(offset + f, end);
      cur = end;
    } else {
      for (Symbol a : lit_word(item)) {
        State r = add(-1);
        nfa.add_transition(cur, a, r);
        cur = r;
      }
    }
  }
  nfa.set_final(cur);

  // KMP automaton over the needle; reaching |n| means the needle occurred.
  std::vector<std::size_t> fail(n.size() + 1, 0);
  for (std::size_t i = 1, k = 0; i < n.size(); ++i) {
    while (k > 0 && n[i] != n[k]) k = fail[k];
    if (n[i] == n[k]) ++k;
    fail[i + 1] = k;
  }
  auto kmp = [&](std::size_t j, Symbol a) {
    while (j > 0 && n[j] != a) j = fail[j];
    return n[j] == a ? j + 1 : 0;
  };

  const std::size_t width = n.size();
  auto key = [&](State q, std::size_t j) { return static_cast<std::size_t>(q) * width + j; };
  std::vector<std::ptrdiff_t> parent(nfa.size() * width, -2);
  std::vector<std::ptrdiff_t> letter(nfa.size() * width, -1);
  std::deque<std::pair<State, std::size_t>> bfs;
  for (State q : nfa.initials()) {
    parent[key(q, 0)] = -1;
    bfs.emplace_back(q, 0);
  }
  std::optional<std::pair<State, std::size_t>> goal;
  while (!bfs.empty() && !goal) {
    auto [q, j] = bfs.front();
    bfs.pop_front();
    if (nfa.is_final(q)) {
      goal.emplace(q, j);
      break;
    }
    auto visit = [&](State r, std::size_t k, std::ptrdiff_t a) {
      if (k == width || parent[key(r, k)] != -2) return;
      parent[key(r, k)] = static_cast<std::ptrdiff_t>(key(q, j));
      letter[key(r, k)] = a;
      bfs.emplace_back(r, k);
    };
    for (State r : nfa.epsilons(q)) visit(r, j, -1);
    for (auto t : nfa.transitions(q)) visit(t.target, kmp(j, t.symbol), static_cast<std::ptrdiff_t>(t.symbol));
  }
  if (!goal) {
    result.refuted = true;
    return result;
  }

  std::vector<Word> segments(occ_var.size());
  for (auto k = static_cast<std::ptrdiff_t>(key(goal->first, goal->second)); parent[static_cast<std::size_t>(k)] >= 0;
       k = parent[static_cast<std::size_t>(k)]) {
    const auto uk = static_cast<std::size_t>(k);
    if (letter[uk] < 0) continue;
    const auto from = static_cast<State>(static_cast<std::size_t>(parent[uk]) / width);
    if (tag[from] >= 0) segments[static_cast<std::size_t>(tag[from])].push_back(static_cast<Symbol>(letter[uk]));
  }
  Assignment model;
  for (std::size_t i = 0; i < occ_var.size(); ++i) {
    auto& w = segments[i];
    std::reverse(w.begin(), w.end());
    auto [it, fresh] = model.emplace(occ_var[i], w);
    if (!fresh && it->second != w) return result;
  }
  for (const auto& x : inst.occurring_vars()) {
    if (!model.contains(x)) model[x] = shortest_word(inst.lang(x));
  }
  if (satisfies(inst, model)) result.model = std::move(model);
  return result;
}

}  // namespace notcontains
