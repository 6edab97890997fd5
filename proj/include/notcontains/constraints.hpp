#pragma once

// Instance model for ¬Contains(N, H) with regular constraints: terms,
// assignments, normalization into decomposed disjuncts, bounds and Base.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "notcontains/automata.hpp"

namespace notcontains {

struct Lit {
  Word word;
  friend bool operator==(const Lit&, const Lit&) = default;
};

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

using TermItem = std::variant<Lit, VarRef>;
using Term = std::vector<TermItem>;
using Assignment = std::map<std::string, Word>;

inline bool is_var(const TermItem& item) { return std::holds_alternative<VarRef>(item); }
inline const std::string& var_name(const TermItem& item) { return std::get<VarRef>(item).name; }
inline const Word& lit_word(const TermItem& item) { return std::get<Lit>(item).word; }

/// Merges adjacent literals and drops empty ones.
inline Term canonical_term(const Term& t) {
  Term out;
  for (const auto& item : t) {
    if (is_var(item)) {
      out.push_back(item);
    } else if (!lit_word(item).empty()) {
      if (!out.empty() && !is_var(out.back())) {
        append(std::get<Lit>(out.back()).word, lit_word(item));
      } else {
        out.push_back(item);
      }
    }
  }
  return out;
}

inline Term concat_terms(const Term& a, const Term& b) {
  Term out = a;
  out.insert(out.end(), b.begin(), b.end());
  return canonical_term(out);
}

inline std::size_t occurrences(const Term& t, const std::string& x) {
  return static_cast<std::size_t>(
      std::count_if(t.begin(), t.end(), [&](const TermItem& i) { return is_var(i) && var_name(i) == x; }));
}

inline std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  for (const auto& i : t) {
    if (is_var(i)) out.insert(var_name(i));
  }
  return out;
}

inline bool is_ground(const Term& t) {
  return std::none_of(t.begin(), t.end(), [](const TermItem& i) { return is_var(i); });
}

/// Replaces each occurrence of a variable in `sub` by its term.
inline Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  Term out;
  for (const auto& item : t) {
    if (is_var(item)) {
      if (auto it = sub.find(var_name(item)); it != sub.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
        continue;
      }
    }
    out.push_back(item);
  }
  return canonical_term(out);
}

inline Term substitute(const Term& t, const Assignment& values) {
  std::map<std::string, Term> sub;
  for (const auto& [x, w] : values) sub[x] = Term{Lit{w}};
  return substitute(t, sub);
}

/// sigma(t); throws Error when a variable is unassigned.
inline Word evaluate(const Term& t, const Assignment& sigma) {
  Word out;
  for (const auto& item : t) {
    if (is_var(item)) {
      auto it = sigma.find(var_name(item));
      if (it == sigma.end()) throw Error("variable '" + var_name(item) + "' is unassigned");
      append(out, it->second);
    } else {
      append(out, lit_word(item));
    }
  }
  return out;
}

struct Instance {
  Alphabet alphabet;
  Term needle;
  Term haystack;
  std::map<std::string, Dfa> langs;

  std::set<std::string> occurring_vars() const {
    auto vs = term_vars(needle);
    auto hs = term_vars(haystack);
    vs.insert(hs.begin(), hs.end());
    return vs;
  }

  const Dfa& lang(const std::string& x) const {
    auto it = langs.find(x);
    if (it == langs.end()) throw Error("variable '" + x + "' has no language");
    return it->second;
  }
};

/// Memberships hold and sigma(N) is not a factor of sigma(H).
inline bool satisfies(const Instance& inst, const Assignment& sigma) {
  for (const auto& x : inst.occurring_vars()) {
    auto it = sigma.find(x);
    if (it == sigma.end() || !inst.lang(x).accepts(it->second)) return false;
  }
  return !is_factor(evaluate(inst.needle, sigma), evaluate(inst.haystack, sigma));
}

struct VarFlags {
  bool flat = false;
  bool decomposed = false;
  bool finite = false;
};

inline VarFlags var_flags(const Dfa& dfa) {
  return {is_flat(classify_flatness(dfa)), is_decomposed(dfa), is_finite_language(dfa)};
}

// ---------------------------------------------------------------------------
// Normalization.

struct Disjunct {
  Instance inst;
  /// Original variable -> term over the disjunct's variables and letters.
  std::map<std::string, Term> origin;
};

struct Normalized {
  std::vector<Disjunct> disjuncts;
  /// Set when a variable-free disjunct already holds; origin terms are ground.
  std::optional<Assignment> trivial_model;
};

struct Alternative {
  Term term;
  std::map<std::string, Dfa> slots;
};

namespace detail {

// Language w* for a non-empty loop word w.
inline Dfa star_dfa(const Word& w) {
  Nfa nfa;
  State q0 = nfa.add_state();
  nfa.add_initial(q0);
  nfa.set_final(q0);
  State q = q0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    State r = i + 1 == w.size() ? q0 : nfa.add_state();
    nfa.add_transition(q, w[i], r);
    q = r;
  }
  return *canonical_dfa(nfa);
}

// Words read inside one component from `from` to `to`, as a DFA.
inline Dfa component_dfa(const Dfa& dfa, const SccInfo& scc, State from, State to) {
  Nfa nfa;
  for (std::size_t q = 0; q < dfa.size(); ++q) nfa.add_state();
  const auto comp = scc.component[from];
  for (State q : scc.members[comp]) {
    for (auto t : dfa.transitions(q)) {
      if (scc.component[t.target] == comp) nfa.add_transition(q, t.symbol, t.target);
    }
  }
  nfa.add_initial(from);
  nfa.set_final(to);
  return *canonical_dfa(nfa);
}

struct AltBuilder {
  const Dfa& dfa;
  const SccInfo& scc;
  const std::string& base_name;
  std::size_t cap;
  std::vector<Alternative> out;

  void emit(const Term& items, const std::vector<Dfa>& slots) {
    if (out.size() >= cap) throw CapExceeded("normalization-cap");
    Alternative alt;
    std::size_t slot = 0;
    Term t;
    for (const auto& item : items) {
      if (is_var(item)) {
        std::string name = base_name + "." + std::to_string(out.size()) + "." + std::to_string(slot);
        alt.slots.emplace(name, slots[slot++]);
        t.push_back(VarRef{name});
      } else {
        t.push_back(item);
      }
    }
    alt.term = canonical_term(t);
    out.push_back(std::move(alt));
  }

  void walk(State q, Term items, std::vector<Dfa> slots) {
    const auto comp = scc.component[q];
    if (!scc.nontrivial[comp]) {
      if (dfa.is_final(q)) emit(items, slots);
      for (auto t : dfa.transitions(q)) {
        Term next = items;
        next.push_back(Lit{Word{t.symbol}});
        walk(t.target, std::move(next), slots);
      }
      return;
    }
    auto flat = classify_flatness(component_dfa(dfa, scc, q, q));
    const bool cycle = is_flat(flat);
    for (State x : scc.members[comp]) {
      bool has_exit = dfa.is_final(x);
      for (auto t : dfa.transitions(x)) has_exit |= scc.component[t.target] != comp;
      if (!has_exit) continue;
      Term here = items;
      auto here_slots = slots;
      if (cycle) {
        // Simple cycle: path to x, then x's rotation of the loop word starred.
        Dfa at_x = component_dfa(dfa, scc, x, x);
        here.push_back(Lit{connector(dfa, q, x)});
        here_slots.push_back(star_dfa(*star_loop_word(at_x)));
      } else {
        here_slots.push_back(component_dfa(dfa, scc, q, x));
      }
      here.push_back(VarRef{""});
      if (dfa.is_final(x)) emit(here, here_slots);
      for (auto t : dfa.transitions(x)) {
        if (scc.component[t.target] == comp) continue;
        Term next = here;
        next.push_back(Lit{Word{t.symbol}});
        walk(t.target, std::move(next), here_slots);
      }
    }
  }
};

}  // namespace detail

/// Splits L_x into alternatives literal . slot . literal . slot ..., each slot a
/// decomposed language. Slot variables are named "<x>.<alternative>.<slot>";
/// a language that is already decomposed keeps its own name.
inline std::vector<Alternative> decompose_variable(const std::string& x, const Dfa& dfa,
                                                   std::size_t cap = 4096) {
  if (is_decomposed(dfa) && (star_loop_word(dfa) || !is_flat(classify_flatness(dfa)))) {
    return {Alternative{Term{VarRef{x}}, {{x, dfa}}}};
  }
  auto scc = strongly_connected_components(dfa);
  detail::AltBuilder b{dfa, scc, x, cap, {}};
  b.walk(dfa.initial(), {}, {});
  return std::move(b.out);
}

/// Equisatisfiable disjunction of normalized instances. Throws CapExceeded
/// ("normalization-cap") when the number of disjuncts would exceed `cap`.
inline Normalized normalize(const Instance& inst, std::size_t cap = 4096) {
  Normalized result;
  const auto vars = inst.occurring_vars();
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<std::vector<Alternative>> alts;
  std::size_t product = 1;
  for (const auto& x : names) {
    alts.push_back(decompose_variable(x, inst.lang(x), cap));
    product *= alts.back().size();
    if (product > cap) throw CapExceeded("normalization-cap");
  }

  std::vector<std::size_t> choice(names.size(), 0);
  while (true) {
    Disjunct d;
    d.inst.alphabet = inst.alphabet;
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& alt = alts[i][choice[i]];
      sub[names[i]] = alt.term;
      d.origin[names[i]] = alt.term;
      for (const auto& [slot, dfa] : alt.slots) d.inst.langs.emplace(slot, dfa);
    }
    d.inst.needle = substitute(inst.needle, sub);
    d.inst.haystack = substitute(inst.haystack, sub);
    if (d.inst.occurring_vars().empty()) {
      if (!is_factor(evaluate(d.inst.needle, {}), evaluate(d.inst.haystack, {}))) {
        Assignment model;
        for (const auto& [x, t] : d.origin) model[x] = evaluate(t, {});
        result.trivial_model = std::move(model);
        result.disjuncts.clear();
        return result;
      }
    } else {
      result.disjuncts.push_back(std::move(d));
    }
    // Odometer, last variable fastest.
    std::size_t i = names.size();
    while (i > 0 && ++choice[i - 1] == alts[i - 1].size()) choice[--i] = 0;
    if (i == 0) break;
  }
  return result;
}

/// Model of the original instance from a model of a disjunct.
inline Assignment reconstruct(const Disjunct& d, const Assignment& sigma) {
  Assignment out;
  for (const auto& [x, t] : d.origin) out[x] = evaluate(t, sigma);
  return out;
}

// ---------------------------------------------------------------------------
// Bounds and Base.

/// Primitive root of the loop word of a normalized flat variable (L_x = w*).
inline Word base(const Instance& inst, const std::string& x) {
  auto w = star_loop_word(inst.lang(x));
  if (!w) throw Error("base: variable '" + x + "' is not of the form w*");
  return primitive_root(*w).root;
}

struct Bounds {
  std::size_t p_lit = 0;
  std::size_t p_aut = 0;
  std::size_t p_prim = 0;
  std::size_t K0 = 0;
  std::size_t N0 = 0;
  std::size_t G = 0;

  static Bounds from_parameters(std::size_t p_lit, std::size_t p_aut, std::size_t p_prim) {
    Bounds b{p_lit, p_aut, p_prim, 0, 0, 0};
    b.K0 = 2 * p_prim * p_aut + p_lit;
    b.N0 = b.K0 + 4 * p_prim + p_aut;
    b.G = b.N0 + 2 * p_prim + 2 * p_lit;
    return b;
  }

  /// Multiplies K0/N0/G by f, keeping 2 <= K0 < N0 < G.
  Bounds scaled(double f) const {
    Bounds b = *this;
    b.K0 = std::max<std::size_t>(2, static_cast<std::size_t>(f * static_cast<double>(K0)));
    b.N0 = std::max<std::size_t>(b.K0 + 1, static_cast<std::size_t>(f * static_cast<double>(N0)));
    b.G = std::max<std::size_t>(b.N0 + 1, static_cast<std::size_t>(f * static_cast<double>(G)));
    return b;
  }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

inline std::size_t longest_literal(const Term& t) {
  std::size_t m = 0;
  for (const auto& item : canonical_term(t)) {
    if (!is_var(item)) m = std::max(m, lit_word(item).size());
  }
  return m;
}

/// Longest Base over flat needle variables of the form w*.
inline std::size_t max_needle_base(const Instance& inst) {
  std::size_t m = 0;
  for (const auto& x : term_vars(inst.needle)) {
    if (star_loop_word(inst.lang(x))) m = std::max(m, base(inst, x).size());
  }
  return m;
}

/// Non-flat variables occurring only in the haystack.
inline std::vector<std::string> haystack_nonflat_vars(const Instance& inst) {
  std::vector<std::string> out;
  const auto in_needle = term_vars(inst.needle);
  for (const auto& z : term_vars(inst.haystack)) {
    if (!in_needle.contains(z) && !is_flat(classify_flatness(inst.lang(z)))) out.push_back(z);
  }
  return out;
}

inline Word gamma_word(const Instance& inst, const std::string& z) {
  auto b = butterfly_at(inst.lang(z));
  return build_gamma_z(b.u, b.v, max_needle_base(inst));
}

inline Bounds compute_bounds(const Instance& inst) {
  std::size_t p_lit = std::max(longest_literal(inst.needle), longest_literal(inst.haystack));
  std::size_t p_aut = 0;
  for (const auto& x : inst.occurring_vars()) p_aut = std::max(p_aut, inst.lang(x).size());
  std::size_t p_prim = max_needle_base(inst);
  for (const auto& z : haystack_nonflat_vars(inst)) p_prim = std::max(p_prim, gamma_word(inst, z).size());
  return Bounds::from_parameters(p_lit, p_aut, p_prim);
}

}  // namespace notcontains
