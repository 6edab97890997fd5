#pragma once

// Finite automata over symbol ids: Thompson-style NFAs, canonical minimal trim
// DFAs, strongly connected components, flatness classification with
// certificates, connectors, butterflies and length projections.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "notcontains/word.hpp"

namespace notcontains {

using State = std::uint32_t;

struct Transition {
  Symbol symbol = 0;
  State target = 0;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

class Nfa {
 public:
  State add_state() {
    edges_.emplace_back();
    eps_.emplace_back();
    finals_.push_back(false);
    return static_cast<State>(edges_.size() - 1);
  }

  void add_transition(State from, Symbol a, State to) { edges_[from].push_back({a, to}); }
  void add_epsilon(State from, State to) { eps_[from].push_back(to); }
  void add_initial(State q) { initials_.push_back(q); }
  void set_final(State q, bool final = true) { finals_[q] = final; }

  std::size_t size() const noexcept { return edges_.size(); }
  std::span<const Transition> transitions(State q) const { return edges_[q]; }
  std::span<const State> epsilons(State q) const { return eps_[q]; }
  std::span<const State> initials() const { return initials_; }
  bool is_final(State q) const { return finals_[q]; }

  /// Copies `other` into this automaton; returns the offset of its states.
  State embed(const Nfa& other) {
    const auto offset = static_cast<State>(size());
    for (std::size_t q = 0; q < other.size(); ++q) add_state();
    for (std::size_t q = 0; q < other.size(); ++q) {
      for (auto t : other.edges_[q]) edges_[offset + q].push_back({t.symbol, t.target + offset});
      for (auto r : other.eps_[q]) eps_[offset + q].push_back(r + offset);
    }
    return offset;
  }

 private:
  std::vector<std::vector<Transition>> edges_;
  std::vector<std::vector<State>> eps_;
  std::vector<State> initials_;
  std::vector<bool> finals_;
};

/// Minimal trim DFA with canonical state numbering: state 0 is initial and the
/// remaining states are numbered breadth-first, exploring symbols in id order.
/// Only canonical_dfa() constructs non-empty values.
class Dfa {
 public:
  Dfa() = default;

  std::size_t size() const noexcept { return edges_.size(); }
  State initial() const noexcept { return 0; }
  bool is_final(State q) const { return finals_[q]; }
  std::span<const Transition> transitions(State q) const { return edges_[q]; }
  std::size_t out_degree(State q) const { return edges_[q].size(); }

  std::optional<State> step(State q, Symbol a) const {
    const auto& es = edges_[q];
    auto it = std::lower_bound(es.begin(), es.end(), Transition{a, 0},
                               [](const Transition& x, const Transition& y) { return x.symbol < y.symbol; });
    if (it == es.end() || it->symbol != a) return std::nullopt;
    return it->target;
  }

  std::optional<State> run(State q, std::span<const Symbol> w) const {
    std::optional<State> cur = q;
    for (Symbol a : w) {
      cur = step(*cur, a);
      if (!cur) return std::nullopt;
    }
    return cur;
  }

  bool accepts(std::span<const Symbol> w) const {
    if (edges_.empty()) return false;
    auto q = run(initial(), w);
    return q && is_final(*q);
  }

  std::vector<State> final_states() const {
    std::vector<State> out;
    for (State q = 0; q < size(); ++q) {
      if (finals_[q]) out.push_back(q);
    }
    return out;
  }

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  friend std::optional<Dfa> canonical_dfa(const Nfa& nfa);
  std::vector<std::vector<Transition>> edges_;  // sorted by symbol
  std::vector<bool> finals_;
};

// ---------------------------------------------------------------------------
// Construction.

inline std::vector<State> epsilon_closure(const Nfa& nfa, std::vector<State> seeds) {
  std::vector<bool> seen(nfa.size(), false);
  std::vector<State> stack;
  for (State q : seeds) {
    if (!seen[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  }
  std::vector<State> out;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    out.push_back(q);
    for (State r : nfa.epsilons(q)) {
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Subset construction, trimming, minimization and canonical renumbering.
/// Returns nullopt when the language is empty.
inline std::optional<Dfa> canonical_dfa(const Nfa& nfa) {
  using Subset = std::vector<State>;
  std::map<Subset, State> index;
  std::vector<Subset> subsets;
  std::vector<std::vector<Transition>> edges;
  std::vector<bool> finals;

  auto intern = [&](Subset s) -> State {
    auto [it, fresh] = index.try_emplace(s, static_cast<State>(subsets.size()));
    if (fresh) {
      bool fin = std::any_of(s.begin(), s.end(), [&](State q) { return nfa.is_final(q); });
      subsets.push_back(std::move(s));
      edges.emplace_back();
      finals.push_back(fin);
    }
    return it->second;
  };

  intern(epsilon_closure(nfa, Subset(nfa.initials().begin(), nfa.initials().end())));
  for (State i = 0; i < subsets.size(); ++i) {
    std::map<Symbol, Subset> moves;
    for (State q : subsets[i]) {
      for (auto t : nfa.transitions(q)) moves[t.symbol].push_back(t.target);
    }
    for (auto& [a, targets] : moves) {
      State j = intern(epsilon_closure(nfa, std::move(targets)));
      edges[i].push_back({a, j});
    }
  }

  // Co-reachability.
  const std::size_t n = subsets.size();
  std::vector<std::vector<State>> preds(n);
  for (State q = 0; q < n; ++q) {
    for (auto t : edges[q]) preds[t.target].push_back(q);
  }
  std::vector<bool> live(n, false);
  std::deque<State> work;
  for (State q = 0; q < n; ++q) {
    if (finals[q]) {
      live[q] = true;
      work.push_back(q);
    }
  }
  while (!work.empty()) {
    State q = work.front();
    work.pop_front();
    for (State p : preds[q]) {
      if (!live[p]) {
        live[p] = true;
        work.push_back(p);
      }
    }
  }
  if (!live[0]) return std::nullopt;

  // Moore refinement on the live part; missing transitions go to an implicit sink.
  std::vector<std::size_t> cls(n, 0);
  for (State q = 0; q < n; ++q) cls[q] = finals[q] ? 1 : 0;
  std::size_t num_classes = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::pair<Symbol, std::ptrdiff_t>>>, std::size_t> sig_index;
    std::vector<std::size_t> next(n, 0);
    for (State q = 0; q < n; ++q) {
      if (!live[q]) continue;
      std::vector<std::pair<Symbol, std::ptrdiff_t>> sig;
      for (auto t : edges[q]) {
        if (live[t.target]) sig.emplace_back(t.symbol, static_cast<std::ptrdiff_t>(cls[t.target]));
      }
      auto [it, fresh] = sig_index.try_emplace({cls[q], std::move(sig)}, sig_index.size());
      next[q] = it->second;
    }
    const std::size_t count = sig_index.size();
    cls = std::move(next);
    if (count == num_classes) break;
    num_classes = count;
  }

  // Canonical breadth-first numbering of classes.
  std::vector<std::ptrdiff_t> number(num_classes, -1);
  std::vector<State> representative;
  std::deque<State> bfs{0};
  number[cls[0]] = 0;
  representative.push_back(0);
  Dfa dfa;
  while (!bfs.empty()) {
    State q = bfs.front();
    bfs.pop_front();
    for (auto t : edges[q]) {
      if (!live[t.target]) continue;
      auto c = cls[t.target];
      if (number[c] < 0) {
        number[c] = static_cast<std::ptrdiff_t>(representative.size());
        representative.push_back(t.target);
        bfs.push_back(t.target);
      }
    }
  }
  dfa.edges_.resize(representative.size());
  dfa.finals_.resize(representative.size());
  for (State i = 0; i < representative.size(); ++i) {
    State q = representative[i];
    dfa.finals_[i] = finals[q];
    for (auto t : edges[q]) {
      if (live[t.target]) dfa.edges_[i].push_back({t.symbol, static_cast<State>(number[cls[t.target]])});
    }
  }
  return dfa;
}

inline Nfa to_nfa(const Dfa& dfa) {
  Nfa nfa;
  for (std::size_t q = 0; q < dfa.size(); ++q) nfa.add_state();
  for (State q = 0; q < dfa.size(); ++q) {
    for (auto t : dfa.transitions(q)) nfa.add_transition(q, t.symbol, t.target);
    nfa.set_final(q, dfa.is_final(q));
  }
  if (dfa.size() > 0) nfa.add_initial(dfa.initial());
  return nfa;
}

/// Same transitions with a different initial state and final set (language L_{q->F}).
inline std::optional<Dfa> rerooted(const Dfa& dfa, State initial, const std::vector<State>& finals) {
  Nfa nfa;
  for (std::size_t q = 0; q < dfa.size(); ++q) nfa.add_state();
  for (State q = 0; q < dfa.size(); ++q) {
    for (auto t : dfa.transitions(q)) nfa.add_transition(q, t.symbol, t.target);
  }
  for (State f : finals) nfa.set_final(f);
  nfa.add_initial(initial);
  return canonical_dfa(nfa);
}

inline Nfa word_nfa(std::span<const Symbol> w) {
  Nfa nfa;
  State q = nfa.add_state();
  nfa.add_initial(q);
  for (Symbol a : w) {
    State r = nfa.add_state();
    nfa.add_transition(q, a, r);
    q = r;
  }
  nfa.set_final(q);
  return nfa;
}

/// Product automaton of two DFAs (language intersection).
inline std::optional<Dfa> intersect(const Dfa& a, const Dfa& b) {
  if (a.size() == 0 || b.size() == 0) return std::nullopt;
  Nfa nfa;
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State p, State q) {
    auto [it, fresh] = index.try_emplace({p, q}, static_cast<State>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(p, q);
      nfa.add_state();
      nfa.set_final(it->second, a.is_final(p) && b.is_final(q));
    }
    return it->second;
  };
  nfa.add_initial(intern(a.initial(), b.initial()));
  for (State i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (auto t : a.transitions(p)) {
      if (auto r = b.step(q, t.symbol)) nfa.add_transition(i, t.symbol, intern(t.target, *r));
    }
  }
  return canonical_dfa(nfa);
}

// ---------------------------------------------------------------------------
// Queries.

inline bool membership(const Dfa& dfa, std::span<const Symbol> w) { return dfa.accepts(w); }

/// All accepted words of length <= max_len in length-then-lexicographic order.
/// Throws CapExceeded when more than `cap` words would be produced.
inline std::vector<Word> enumerate_words(const Dfa& dfa, std::size_t max_len,
                                         std::size_t cap = static_cast<std::size_t>(-1)) {
  std::vector<Word> out;
  if (dfa.size() == 0) return out;
  std::vector<std::pair<Word, State>> layer{{Word{}, dfa.initial()}};
  for (std::size_t len = 0;; ++len) {
    for (auto& [w, q] : layer) {
      if (dfa.is_final(q)) {
        if (out.size() >= cap) throw CapExceeded("enumerate-words");
        out.push_back(w);
      }
    }
    if (len == max_len) break;
    std::vector<std::pair<Word, State>> next;
    for (auto& [w, q] : layer) {
      for (auto t : dfa.transitions(q)) {
        Word nw = w;
        nw.push_back(t.symbol);
        next.emplace_back(std::move(nw), t.target);
      }
    }
    if (next.empty()) break;
    if (next.size() > cap) throw CapExceeded("enumerate-words");
    layer = std::move(next);
  }
  return out;
}

/// Lexicographically least accepted word of exactly length n, if any.
inline std::optional<Word> lex_least_word_of_length(const Dfa& dfa, std::size_t n) {
  if (dfa.size() == 0) return std::nullopt;
  // reach[m][q]: a word of length m leads from q to a final state.
  std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(dfa.size(), false));
  for (State q = 0; q < dfa.size(); ++q) reach[0][q] = dfa.is_final(q);
  for (std::size_t m = 1; m <= n; ++m) {
    for (State q = 0; q < dfa.size(); ++q) {
      for (auto t : dfa.transitions(q)) {
        if (reach[m - 1][t.target]) {
          reach[m][q] = true;
          break;
        }
      }
    }
  }
  if (!reach[n][dfa.initial()]) return std::nullopt;
  Word w;
  State q = dfa.initial();
  for (std::size_t m = n; m > 0; --m) {
    for (auto t : dfa.transitions(q)) {
      if (reach[m - 1][t.target]) {
        w.push_back(t.symbol);
        q = t.target;
        break;
      }
    }
  }
  return w;
}

/// Shortest words first, ties broken by symbol order: the lexicographically
/// least among the shortest words w with q -w-> r.
inline Word connector(const Dfa& dfa, State from, State to) {
  if (from == to) return {};
  std::vector<std::ptrdiff_t> parent(dfa.size(), -1);
  std::vector<Symbol> via(dfa.size(), 0);
  std::vector<bool> seen(dfa.size(), false);
  std::deque<State> bfs{from};
  seen[from] = true;
  while (!bfs.empty()) {
    State q = bfs.front();
    bfs.pop_front();
    for (auto t : dfa.transitions(q)) {
      if (seen[t.target]) continue;
      seen[t.target] = true;
      parent[t.target] = q;
      via[t.target] = t.symbol;
      if (t.target == to) {
        Word w;
        for (State c = to; c != from; c = static_cast<State>(parent[c])) w.push_back(via[c]);
        std::reverse(w.begin(), w.end());
        return w;
      }
      bfs.push_back(t.target);
    }
  }
  throw Error("connector: target state is unreachable");
}

/// Shortest, then lexicographically least, accepted word.
inline Word shortest_word(const Dfa& dfa) {
  if (dfa.size() == 0) throw Error("shortest_word: empty language");
  for (std::size_t n = 0;; ++n) {
    if (auto w = lex_least_word_of_length(dfa, n)) return *w;
    if (n > dfa.size()) throw InternalError("shortest_word: trim DFA without short word");
  }
}

// ---------------------------------------------------------------------------
// Strongly connected components.

struct SccInfo {
  std::vector<std::size_t> component;  // state -> component id
  std::vector<std::vector<State>> members;
  std::vector<bool> nontrivial;  // has an internal transition
};

inline SccInfo strongly_connected_components(const Dfa& dfa) {
  const std::size_t n = dfa.size();
  SccInfo info;
  info.component.assign(n, static_cast<std::size_t>(-1));
  std::vector<std::ptrdiff_t> idx(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<State> stack;
  std::ptrdiff_t counter = 0;

  // Iterative Tarjan.
  for (State root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    std::vector<std::pair<State, std::size_t>> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [q, pos] = call.back();
      auto ts = dfa.transitions(q);
      if (pos < ts.size()) {
        State r = ts[pos++].target;
        if (idx[r] < 0) {
          idx[r] = low[r] = counter++;
          stack.push_back(r);
          on_stack[r] = true;
          call.emplace_back(r, 0);
        } else if (on_stack[r]) {
          low[q] = std::min(low[q], idx[r]);
        }
        continue;
      }
      if (low[q] == idx[q]) {
        std::vector<State> comp;
        State r;
        do {
          r = stack.back();
          stack.pop_back();
          on_stack[r] = false;
          info.component[r] = info.members.size();
          comp.push_back(r);
        } while (r != q);
        std::sort(comp.begin(), comp.end());
        info.members.push_back(std::move(comp));
      }
      State done = q;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  info.nontrivial.assign(info.members.size(), false);
  for (State q = 0; q < n; ++q) {
    for (auto t : dfa.transitions(q)) {
      if (info.component[t.target] == info.component[q]) info.nontrivial[info.component[q]] = true;
    }
  }
  return info;
}

inline std::size_t in_component_degree(const Dfa& dfa, const SccInfo& scc, State q) {
  std::size_t d = 0;
  for (auto t : dfa.transitions(q)) d += scc.component[t.target] == scc.component[q];
  return d;
}

inline bool is_finite_language(const Dfa& dfa) {
  auto scc = strongly_connected_components(dfa);
  return std::none_of(scc.nontrivial.begin(), scc.nontrivial.end(), [](bool b) { return b; });
}

/// Single initial, single final, and every state in one nontrivial SCC.
inline bool is_decomposed(const Dfa& dfa) {
  if (dfa.size() == 0 || dfa.final_states().size() != 1) return false;
  auto scc = strongly_connected_components(dfa);
  return scc.members.size() == 1 && scc.nontrivial[0];
}

// ---------------------------------------------------------------------------
// Flat patterns.

/// literals[0] loops[0]* literals[1] ... loops[m-1]* literals[m]; loops are non-empty.
struct FlatPattern {
  std::vector<Word> literals{Word{}};
  std::vector<Word> loops;

  static FlatPattern literal(Word w) { return FlatPattern{{std::move(w)}, {}}; }

  std::size_t min_length() const {
    std::size_t n = 0;
    for (const auto& l : literals) n += l.size();
    return n;
  }

  bool finite() const { return loops.empty(); }

  Word instantiate(std::span<const std::size_t> counts) const {
    Word w = literals[0];
    for (std::size_t i = 0; i < loops.size(); ++i) {
      for (std::size_t k = 0; k < counts[i]; ++k) append(w, loops[i]);
      append(w, literals[i + 1]);
    }
    return w;
  }

  friend auto operator<=>(const FlatPattern&, const FlatPattern&) = default;
};

/// Concatenation a . middle . b of two patterns.
inline FlatPattern concat_patterns(const FlatPattern& a, std::span<const Symbol> middle, const FlatPattern& b) {
  FlatPattern out = a;
  append(out.literals.back(), middle);
  append(out.literals.back(), b.literals.front());
  for (std::size_t i = 0; i < b.loops.size(); ++i) {
    out.loops.push_back(b.loops[i]);
    out.literals.push_back(b.literals[i + 1]);
  }
  return out;
}

/// Adds an NFA fragment for `p` starting at `start`; returns its end state.
inline State add_pattern_path(Nfa& nfa, State start, const FlatPattern& p) {
  State cur = start;
  auto lit = [&](const Word& w) {
    for (Symbol a : w) {
      State r = nfa.add_state();
      nfa.add_transition(cur, a, r);
      cur = r;
    }
  };
  lit(p.literals[0]);
  for (std::size_t i = 0; i < p.loops.size(); ++i) {
    const Word& loop = p.loops[i];
    State hub = nfa.add_state();
    nfa.add_epsilon(cur, hub);
    State q = hub;
    for (std::size_t j = 0; j < loop.size(); ++j) {
      State r = j + 1 == loop.size() ? hub : nfa.add_state();
      nfa.add_transition(q, loop[j], r);
      q = r;
    }
    cur = nfa.add_state();
    nfa.add_epsilon(hub, cur);
    lit(p.literals[i + 1]);
  }
  return cur;
}

inline Nfa patterns_nfa(std::span<const FlatPattern> patterns) {
  Nfa nfa;
  State start = nfa.add_state();
  nfa.add_initial(start);
  for (const auto& p : patterns) {
    State s = nfa.add_state();
    nfa.add_epsilon(start, s);
    nfa.set_final(add_pattern_path(nfa, s, p));
  }
  return nfa;
}

inline bool pattern_member(const FlatPattern& p, std::span<const Symbol> w);

/// Exact membership in a flat pattern by direct matching.
inline bool pattern_member(const FlatPattern& p, std::span<const Symbol> w) {
  // Positions reachable after consuming literal i, tracked as a set of offsets.
  std::vector<bool> at(w.size() + 1, false);
  auto eat_literal = [&](const Word& lit) {
    std::vector<bool> next(w.size() + 1, false);
    for (std::size_t i = 0; i <= w.size(); ++i) {
      if (at[i] && i + lit.size() <= w.size() && std::equal(lit.begin(), lit.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
        next[i + lit.size()] = true;
      }
    }
    at = std::move(next);
  };
  at[0] = true;
  eat_literal(p.literals[0]);
  for (std::size_t k = 0; k < p.loops.size(); ++k) {
    const Word& loop = p.loops[k];
    for (std::size_t i = 0; i <= w.size(); ++i) {
      if (at[i] && i + loop.size() <= w.size() &&
          std::equal(loop.begin(), loop.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
        at[i + loop.size()] = true;
      }
    }
    eat_literal(p.literals[k + 1]);
  }
  return at[w.size()];
}

/// Exactly {w in p : |w| >= n} as a finite union of patterns (loops unrolled minimally).
inline std::vector<FlatPattern> restrict_min_length(const FlatPattern& p, std::size_t n,
                                                    std::size_t cap = 100000) {
  const std::size_t base = p.min_length();
  if (base >= n) return {p};
  if (p.loops.empty()) return {};
  const std::size_t deficit = n - base;
  const std::size_t m = p.loops.size();
  std::vector<std::size_t> limit(m);
  for (std::size_t i = 0; i < m; ++i) limit[i] = (deficit + p.loops[i].size() - 1) / p.loops[i].size();

  std::vector<FlatPattern> out;
  std::vector<std::size_t> c(m, 0);
  auto weight = [&](const std::vector<std::size_t>& v) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < m; ++i) s += v[i] * p.loops[i].size();
    return s;
  };
  std::size_t visited = 0;
  while (true) {
    if (++visited > cap) throw CapExceeded("restrict-min-length");
    if (weight(c) >= deficit) {
      bool minimal = true;
      for (std::size_t i = 0; i < m && minimal; ++i) {
        if (c[i] == 0) continue;
        --c[i];
        if (weight(c) >= deficit) minimal = false;
        ++c[i];
      }
      if (minimal) {
        FlatPattern q = p;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t k = 0; k < c[i]; ++k) append(q.literals[i], p.loops[i]);
        }
        out.push_back(std::move(q));
      }
    }
    std::size_t i = 0;
    while (i < m && c[i] == limit[i]) c[i++] = 0;
    if (i == m) break;
    ++c[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Butterflies and flatness.

/// Witness of non-flatness: prefix {u, v}* suffix is contained in the language,
/// and u, v start with different letters at loop_state.
struct Butterfly {
  Word prefix;
  Word u;
  Word v;
  Word suffix;
  State loop_state = 0;
};

/// Canonical butterfly: lowest-numbered state with two in-SCC transitions,
/// cycles through its two smallest branching letters.
inline Butterfly butterfly_at(const Dfa& dfa) {
  auto scc = strongly_connected_components(dfa);
  for (State q = 0; q < dfa.size(); ++q) {
    if (in_component_degree(dfa, scc, q) < 2) continue;
    std::vector<Transition> inside;
    for (auto t : dfa.transitions(q)) {
      if (scc.component[t.target] == scc.component[q]) inside.push_back(t);
    }
    Butterfly b;
    b.loop_state = q;
    b.u = concat(Word{inside[0].symbol}, connector(dfa, inside[0].target, q));
    b.v = concat(Word{inside[1].symbol}, connector(dfa, inside[1].target, q));
    b.prefix = connector(dfa, dfa.initial(), q);
    std::optional<State> fin;
    for (State f : dfa.final_states()) {
      try {
        b.suffix = connector(dfa, q, f);
        fin = f;
        break;
      } catch (const Error&) {
      }
    }
    if (!fin) throw InternalError("butterfly_at: loop state reaches no final state");
    return b;
  }
  throw Error("butterfly_at: the language is flat");
}

struct FlatDecomposition {
  std::vector<FlatPattern> patterns;
};

using Flatness = std::variant<FlatDecomposition, Butterfly>;

inline bool is_flat(const Flatness& f) { return std::holds_alternative<FlatDecomposition>(f); }

namespace detail {

inline void push_literal(std::vector<Word>& literals, Symbol a) { literals.back().push_back(a); }

// Enumerates SCC-dag paths of a DFA whose nontrivial SCCs are simple cycles.
inline void enumerate_flat_paths(const Dfa& dfa, const SccInfo& scc, State q, FlatPattern cur,
                                 std::vector<FlatPattern>& out, std::size_t cap) {
  if (out.size() > cap) throw CapExceeded("flat-patterns");
  const auto comp = scc.component[q];
  if (!scc.nontrivial[comp]) {
    if (dfa.is_final(q)) out.push_back(cur);
    for (auto t : dfa.transitions(q)) {
      FlatPattern next = cur;
      push_literal(next.literals, t.symbol);
      enumerate_flat_paths(dfa, scc, t.target, std::move(next), out, cap);
    }
    return;
  }
  // Simple cycle entered at q: loop word rotated at q, then walk the cycle once.
  Word loop;
  std::vector<State> order{q};
  State c = q;
  while (true) {
    std::optional<Transition> next;
    for (auto t : dfa.transitions(c)) {
      if (scc.component[t.target] == comp) next = t;
    }
    loop.push_back(next->symbol);
    c = next->target;
    if (c == q) break;
    order.push_back(c);
  }
  cur.loops.push_back(loop);
  cur.literals.emplace_back();
  for (std::size_t i = 0; i < order.size(); ++i) {
    State s = order[i];
    FlatPattern here = cur;
    for (std::size_t j = 0; j < i; ++j) here.literals.back().push_back(loop[j]);
    if (dfa.is_final(s)) out.push_back(here);
    for (auto t : dfa.transitions(s)) {
      if (scc.component[t.target] == comp) continue;
      FlatPattern next = here;
      push_literal(next.literals, t.symbol);
      enumerate_flat_paths(dfa, scc, t.target, std::move(next), out, cap);
    }
  }
}

}  // namespace detail

/// Flat iff every nontrivial SCC is a simple cycle. Flat results enumerate all
/// SCC-dag paths as patterns denoting exactly the language; non-flat results
/// carry the canonical butterfly.
inline Flatness classify_flatness(const Dfa& dfa, std::size_t pattern_cap = 100000) {
  if (dfa.size() == 0) throw Error("classify_flatness: empty language");
  auto scc = strongly_connected_components(dfa);
  for (State q = 0; q < dfa.size(); ++q) {
    if (in_component_degree(dfa, scc, q) >= 2) return butterfly_at(dfa);
  }
  FlatDecomposition d;
  detail::enumerate_flat_paths(dfa, scc, dfa.initial(), FlatPattern{}, d.patterns, pattern_cap);
  return d;
}

/// Loop word w of a language w* given by a single simple cycle through the
/// initial (and only final) state, if the DFA has that shape.
inline std::optional<Word> star_loop_word(const Dfa& dfa) {
  if (!is_decomposed(dfa) || !dfa.is_final(dfa.initial())) return std::nullopt;
  Word w;
  State q = dfa.initial();
  for (std::size_t i = 0; i < dfa.size(); ++i) {
    if (dfa.out_degree(q) != 1) return std::nullopt;
    auto t = dfa.transitions(q)[0];
    w.push_back(t.symbol);
    q = t.target;
    if (q == dfa.initial()) return i + 1 == dfa.size() ? std::optional<Word>(w) : std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Length projections.

/// Ultimately periodic set of naturals: finite_part plus {offset + k * period}.
struct LengthSet {
  std::set<std::size_t> finite_part;
  std::set<std::pair<std::size_t, std::size_t>> offsets_periods;

  bool contains(std::size_t n) const {
    if (finite_part.contains(n)) return true;
    for (auto [off, per] : offsets_periods) {
      if (n >= off && (n - off) % per == 0) return true;
    }
    return false;
  }

  bool infinite() const { return !offsets_periods.empty(); }
  bool empty() const { return finite_part.empty() && offsets_periods.empty(); }

  std::optional<std::size_t> min() const {
    std::optional<std::size_t> m;
    if (!finite_part.empty()) m = *finite_part.begin();
    for (auto [off, per] : offsets_periods) {
      if (!m || off < *m) m = off;
    }
    return m;
  }

  /// Least element >= n.
  std::optional<std::size_t> least_at_least(std::size_t n) const {
    std::optional<std::size_t> best;
    auto consider = [&](std::size_t v) {
      if (!best || v < *best) best = v;
    };
    for (auto it = finite_part.lower_bound(n); it != finite_part.end(); ++it) {
      consider(*it);
      break;
    }
    for (auto [off, per] : offsets_periods) {
      if (off >= n) {
        consider(off);
      } else {
        consider(off + ((n - off + per - 1) / per) * per);
      }
    }
    return best;
  }

  std::size_t max_period() const {
    std::size_t p = 1;
    for (auto [off, per] : offsets_periods) p = std::max(p, per);
    return p;
  }

  std::size_t period_lcm() const {
    std::size_t p = 1;
    for (auto [off, per] : offsets_periods) p = std::lcm(p, per);
    return p;
  }

  void merge(const LengthSet& other) {
    finite_part.insert(other.finite_part.begin(), other.finite_part.end());
    offsets_periods.insert(other.offsets_periods.begin(), other.offsets_periods.end());
  }
};

/// Exact length set of an NFA, computed on its single-letter projection by
/// iterating the reachable state set until it repeats.
inline LengthSet length_set(const Nfa& nfa) {
  using Subset = std::vector<State>;
  std::map<Subset, std::size_t> seen;
  std::vector<bool> accepting;
  Subset cur = epsilon_closure(nfa, Subset(nfa.initials().begin(), nfa.initials().end()));
  std::size_t step = 0;
  while (true) {
    auto [it, fresh] = seen.try_emplace(cur, step);
    if (!fresh) break;
    accepting.push_back(std::any_of(cur.begin(), cur.end(), [&](State q) { return nfa.is_final(q); }));
    Subset next;
    for (State q : cur) {
      for (auto t : nfa.transitions(q)) next.push_back(t.target);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = epsilon_closure(nfa, std::move(next));
    ++step;
  }
  const std::size_t start = seen.at(cur);
  const std::size_t period = step - start;
  LengthSet ls;
  for (std::size_t n = 0; n < start; ++n) {
    if (accepting[n]) ls.finite_part.insert(n);
  }
  if (!cur.empty()) {
    for (std::size_t n = start; n < step; ++n) {
      if (accepting[n]) ls.offsets_periods.emplace(n, period);
    }
  }
  return ls;
}

inline LengthSet length_set(const Dfa& dfa) { return length_set(to_nfa(dfa)); }

/// Length set of a flat pattern union, computed arithmetically.
inline LengthSet length_set(std::span<const FlatPattern> patterns) {
  LengthSet ls;
  for (const auto& p : patterns) {
    const std::size_t c = p.min_length();
    if (p.loops.empty()) {
      ls.finite_part.insert(c);
      continue;
    }
    std::size_t g = 0, lmax = 0;
    for (const auto& l : p.loops) {
      g = std::gcd(g, l.size());
      lmax = std::max(lmax, l.size());
    }
    // Every multiple of g at or beyond lmax^2 is representable.
    const std::size_t horizon = lmax * lmax;
    std::vector<bool> rep(horizon + 1, false);
    rep[0] = true;
    for (std::size_t n = 1; n <= horizon; ++n) {
      for (const auto& l : p.loops) {
        if (l.size() <= n && rep[n - l.size()]) {
          rep[n] = true;
          break;
        }
      }
    }
    for (std::size_t n = 0; n < horizon; ++n) {
      if (rep[n]) ls.finite_part.insert(c + n);
    }
    ls.offsets_periods.emplace(c + horizon, g);
  }
  return ls;
}

}  // namespace notcontains
