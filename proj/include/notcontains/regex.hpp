#pragma once

// Regex frontend. Grammar (no whitespace, no escapes):
//   union  := concat ('|' concat)*
//   concat := repeat*            -- empty concat denotes the empty word
//   repeat := atom ('*' | '+' | '?')*
//   atom   := letter | '(' union ')' | '[' letter+ ']'

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "notcontains/automata.hpp"

namespace notcontains {

class RegexError : public Error {
 public:
  RegexError(const std::string& what, std::size_t position)
      : Error("regex error at position " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

struct NfaFragment {
  State start;
  State end;
};

class RegexParser {
 public:
  RegexParser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  Nfa parse() {
    NfaFragment f = parse_union();
    if (pos_ != text_.size()) fail(text_[pos_] == ')' ? "unbalanced ')'" : "unexpected character");
    nfa_.add_initial(f.start);
    nfa_.set_final(f.end);
    return std::move(nfa_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw RegexError(what, pos_); }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  NfaFragment epsilon() {
    State s = nfa_.add_state();
    State e = nfa_.add_state();
    nfa_.add_epsilon(s, e);
    return {s, e};
  }

  NfaFragment parse_union() {
    std::vector<NfaFragment> alts{parse_concat()};
    while (at('|')) {
      ++pos_;
      alts.push_back(parse_concat());
    }
    if (alts.size() == 1) return alts[0];
    State s = nfa_.add_state();
    State e = nfa_.add_state();
    for (auto f : alts) {
      nfa_.add_epsilon(s, f.start);
      nfa_.add_epsilon(f.end, e);
    }
    return {s, e};
  }

  NfaFragment parse_concat() {
    std::optional<NfaFragment> acc;
    while (pos_ < text_.size() && !at('|') && !at(')')) {
      NfaFragment f = parse_repeat();
      if (acc) {
        nfa_.add_epsilon(acc->end, f.start);
        acc->end = f.end;
      } else {
        acc = f;
      }
    }
    return acc ? *acc : epsilon();
  }

  NfaFragment parse_repeat() {
    NfaFragment f = parse_atom();
    while (at('*') || at('+') || at('?')) {
      char op = text_[pos_++];
      State s = nfa_.add_state();
      State e = nfa_.add_state();
      nfa_.add_epsilon(s, f.start);
      nfa_.add_epsilon(f.end, e);
      if (op != '+') nfa_.add_epsilon(s, e);
      if (op != '?') nfa_.add_epsilon(f.end, f.start);
      f = {s, e};
    }
    return f;
  }

  Symbol letter() {
    char c = text_[pos_];
    if (c == '#') fail("'#' is reserved");
    auto id = alphabet_.id_of(c);
    if (!id) fail(std::string("letter '") + c + "' is not in the alphabet");
    ++pos_;
    return *id;
  }

  NfaFragment parse_atom() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NfaFragment f = parse_union();
      if (!at(')')) fail("expected ')'");
      ++pos_;
      return f;
    }
    if (c == '[') {
      ++pos_;
      State s = nfa_.add_state();
      State e = nfa_.add_state();
      std::size_t count = 0;
      while (pos_ < text_.size() && !at(']')) {
        nfa_.add_transition(s, letter(), e);
        ++count;
      }
      if (!at(']')) fail("expected ']'");
      if (count == 0) fail("empty character class");
      ++pos_;
      return {s, e};
    }
    if (c == '*' || c == '+' || c == '?') fail("repetition without operand");
    if (c == ']' || c == ')' || c == '|') fail("unexpected character");
    State s = nfa_.add_state();
    State e = nfa_.add_state();
    nfa_.add_transition(s, letter(), e);
    return {s, e};
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
  Nfa nfa_;
};

}  // namespace detail

inline Nfa parse_regex(std::string_view text, const Alphabet& alphabet) {
  return detail::RegexParser(text, alphabet).parse();
}

/// Parses and determinizes; nullopt for the empty language.
inline std::optional<Dfa> regex_dfa(std::string_view text, const Alphabet& alphabet) {
  return canonical_dfa(parse_regex(text, alphabet));
}

/// SMT-LIB strings regex term for a DFA language, by state elimination in
/// canonical state order.
inline std::string dfa_to_smt_regex(const Dfa& dfa, const Alphabet& alphabet) {
  if (dfa.size() == 0) return "re.none";
  // The empty string stands for the empty language.
  const std::string none;
  const std::string eps = "(str.to_re \"\")";
  auto lit = [&](Symbol a) { return "(str.to_re \"" + std::string(1, alphabet.glyph(a)) + "\")"; };
  auto uni = [&](const std::string& x, const std::string& y) {
    if (x.empty()) return y;
    if (y.empty() || x == y) return x;
    return "(re.union " + x + " " + y + ")";
  };
  auto cat = [&](const std::string& x, const std::string& y) {
    if (x.empty() || y.empty()) return none;
    if (x == eps) return y;
    if (y == eps) return x;
    return "(re.++ " + x + " " + y + ")";
  };
  auto star = [&](const std::string& x) {
    if (x.empty() || x == eps) return eps;
    return "(re.* " + x + ")";
  };

  // Generalized NFA with fresh start n and accept n+1.
  const std::size_t n = dfa.size();
  const std::size_t start = n, accept = n + 1;
  std::vector<std::map<std::size_t, std::string>> g(n + 2);
  g[start][dfa.initial()] = eps;
  for (State q = 0; q < n; ++q) {
    for (auto t : dfa.transitions(q)) g[q][t.target] = uni(g[q][t.target], lit(t.symbol));
    if (dfa.is_final(q)) g[q][accept] = uni(g[q][accept], eps);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::string loop = g[k].contains(k) ? star(g[k][k]) : eps;
    for (std::size_t i = 0; i < n + 2; ++i) {
      if (i == k || !g[i].contains(k)) continue;
      for (auto& [j, out] : g[k]) {
        if (j == k) continue;
        g[i][j] = uni(g[i][j], cat(cat(g[i][k], loop), out));
      }
      g[i].erase(k);
    }
    g[k].clear();
  }
  auto it = g[start].find(accept);
  return it == g[start].end() || it->second.empty() ? "re.none" : it->second;
}

}  // namespace notcontains
