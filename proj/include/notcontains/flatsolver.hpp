#pragma once

// Terminal decision for flat instances: the length-abstraction shortcut, a
// bounded iteration-count search over flat patterns, and SMT-LIB export.

#include <cctype>
#include <functional>
#include <ostream>

#include "notcontains/budget.hpp"
#include "notcontains/constraints.hpp"
#include "notcontains/regex.hpp"

namespace notcontains {

enum class Status { Sat, Unsat, Unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
  }
  return "unknown";
}

struct Outcome {
  Status status = Status::Unknown;
  Assignment model;
  std::string reason;

  static Outcome sat(Assignment m) { return {Status::Sat, std::move(m), {}}; }
  static Outcome unsat() { return {Status::Unsat, {}, {}}; }
  static Outcome unknown(std::string why) { return {Status::Unknown, {}, std::move(why)}; }
};

struct FlatInstance {
  Alphabet alphabet;
  Term needle;
  Term haystack;
  std::map<std::string, std::vector<FlatPattern>> langs;

  std::set<std::string> occurring_vars() const {
    auto vs = term_vars(needle);
    auto hs = term_vars(haystack);
    vs.insert(hs.begin(), hs.end());
    return vs;
  }
};

/// Exact flat form of an instance whose variables are all flat.
inline FlatInstance to_flat_instance(const Instance& inst) {
  FlatInstance f{inst.alphabet, inst.needle, inst.haystack, {}};
  for (const auto& x : inst.occurring_vars()) {
    auto c = classify_flatness(inst.lang(x));
    if (!is_flat(c)) throw Error("to_flat_instance: variable '" + x + "' is not flat");
    f.langs[x] = std::get<FlatDecomposition>(c).patterns;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Length abstraction.

/// What the length abstraction needs to know about one variable.
struct LengthProfile {
  std::size_t min = 0;
  bool infinite = false;
  std::size_t max = 0;  // meaningful when finite
  std::function<std::optional<std::size_t>(std::size_t)> at_least;
  std::function<Word(std::size_t)> word_of_length;
};

inline LengthProfile length_profile(const Dfa& dfa) {
  auto ls = length_set(dfa);
  LengthProfile p;
  p.min = *ls.min();
  p.infinite = ls.infinite();
  if (!p.infinite) p.max = *ls.finite_part.rbegin();
  p.at_least = [ls](std::size_t n) { return ls.least_at_least(n); };
  p.word_of_length = [&dfa](std::size_t n) { return *lex_least_word_of_length(dfa, n); };
  return p;
}

namespace detail {

// Loop counts realizing exactly `extra` additional letters, if possible.
inline std::optional<std::vector<std::size_t>> counts_for_extra(const FlatPattern& p, std::size_t extra) {
  std::vector<std::ptrdiff_t> via(extra + 1, -1);
  std::vector<bool> ok(extra + 1, false);
  ok[0] = true;
  for (std::size_t n = 1; n <= extra; ++n) {
    for (std::size_t i = 0; i < p.loops.size(); ++i) {
      const auto l = p.loops[i].size();
      if (l <= n && ok[n - l]) {
        ok[n] = true;
        via[n] = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
  }
  if (!ok[extra]) return std::nullopt;
  std::vector<std::size_t> counts(p.loops.size(), 0);
  for (std::size_t n = extra; n > 0; n -= p.loops[static_cast<std::size_t>(via[n])].size()) {
    ++counts[static_cast<std::size_t>(via[n])];
  }
  return counts;
}

inline std::optional<std::size_t> pattern_length_at_least(const FlatPattern& p, std::size_t n) {
  const std::size_t c = p.min_length();
  if (n <= c) return c;
  if (p.loops.empty()) return std::nullopt;
  std::size_t lmax = 0;
  for (const auto& l : p.loops) lmax = std::max(lmax, l.size());
  for (std::size_t extra = n - c; extra <= n - c + lmax; ++extra) {
    if (counts_for_extra(p, extra)) return c + extra;
  }
  return std::nullopt;
}

}  // namespace detail

inline LengthProfile length_profile(const std::vector<FlatPattern>& patterns) {
  LengthProfile p;
  p.min = static_cast<std::size_t>(-1);
  for (const auto& pat : patterns) {
    p.min = std::min(p.min, pat.min_length());
    p.infinite |= !pat.loops.empty();
    p.max = std::max(p.max, pat.min_length());
  }
  p.at_least = [&patterns](std::size_t n) {
    std::optional<std::size_t> best;
    for (const auto& pat : patterns) {
      auto v = detail::pattern_length_at_least(pat, n);
      if (v && (!best || *v < *best)) best = v;
    }
    return best;
  };
  p.word_of_length = [&patterns](std::size_t n) {
    std::optional<Word> best;
    for (const auto& pat : patterns) {
      if (pat.min_length() > n) continue;
      auto counts = detail::counts_for_extra(pat, n - pat.min_length());
      if (!counts) continue;
      Word w = pat.instantiate(*counts);
      if (!best || w < *best) best = std::move(w);
    }
    return *best;
  };
  return p;
}

/// Per-variable lengths with |sigma(N)| > |sigma(H)|, if any exist. The
/// objective is linear and separable, so the search is exact: variables with
/// more needle than haystack occurrences are raised, all others stay minimal.
inline std::optional<std::map<std::string, std::size_t>> length_witness(
    const Term& needle, const Term& haystack, const std::map<std::string, LengthProfile>& profiles) {
  std::ptrdiff_t total = 0;
  for (const auto& item : needle) {
    if (!is_var(item)) total += static_cast<std::ptrdiff_t>(lit_word(item).size());
  }
  for (const auto& item : haystack) {
    if (!is_var(item)) total -= static_cast<std::ptrdiff_t>(lit_word(item).size());
  }
  std::map<std::string, std::size_t> lengths;
  std::map<std::string, std::ptrdiff_t> weight;
  auto vars = term_vars(needle);
  for (const auto& x : term_vars(haystack)) vars.insert(x);
  for (const auto& x : vars) {
    weight[x] = static_cast<std::ptrdiff_t>(occurrences(needle, x)) - static_cast<std::ptrdiff_t>(occurrences(haystack, x));
    lengths[x] = profiles.at(x).min;
    total += weight[x] * static_cast<std::ptrdiff_t>(lengths[x]);
  }
  for (const auto& x : vars) {
    if (total > 0) break;
    const auto d = weight[x];
    if (d <= 0) continue;
    const auto& p = profiles.at(x);
    if (p.infinite) {
      const auto need = static_cast<std::size_t>((1 - total + d - 1) / d);
      const auto len = *p.at_least(p.min + need);
      total += d * static_cast<std::ptrdiff_t>(len - p.min);
      lengths[x] = len;
    } else {
      total += d * static_cast<std::ptrdiff_t>(p.max - p.min);
      lengths[x] = p.max;
    }
  }
  if (total <= 0) return std::nullopt;
  return lengths;
}

inline std::optional<Assignment> length_abstraction(const Term& needle, const Term& haystack,
                                                    const std::map<std::string, LengthProfile>& profiles) {
  auto lengths = length_witness(needle, haystack, profiles);
  if (!lengths) return std::nullopt;
  Assignment model;
  for (const auto& [x, n] : *lengths) model[x] = profiles.at(x).word_of_length(n);
  return model;
}

inline std::optional<Assignment> length_abstraction(const Instance& inst) {
  std::map<std::string, LengthProfile> profiles;
  for (const auto& x : inst.occurring_vars()) profiles.emplace(x, length_profile(inst.lang(x)));
  return length_abstraction(inst.needle, inst.haystack, profiles);
}

inline std::optional<Assignment> length_abstraction(const FlatInstance& inst) {
  std::map<std::string, LengthProfile> profiles;
  for (const auto& x : inst.occurring_vars()) {
    const auto& pats = inst.langs.at(x);
    if (pats.empty()) return std::nullopt;
    profiles.emplace(x, length_profile(pats));
  }
  return length_abstraction(inst.needle, inst.haystack, profiles);
}

// ---------------------------------------------------------------------------
// Bounded search.

struct FlatOptions {
  std::size_t iter_bound = 8;
  std::size_t max_checks = 2'000'000;
  Deadline deadline;
};

struct FlatStats {
  std::size_t checks = 0;
};

/// Length abstraction, then candidates layer by layer: layer b holds the
/// iteration vectors whose largest count is exactly b. Within a layer the
/// pattern alternatives run in lexicographic order and counts in colex order.
inline Outcome solve_flat(const FlatInstance& inst, const FlatOptions& opt = {}, FlatStats* stats = nullptr) {
  FlatStats local;
  FlatStats& st = stats ? *stats : local;
  const auto var_set = inst.occurring_vars();
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  bool all_finite = true;
  for (const auto& x : vars) {
    const auto& pats = inst.langs.at(x);
    if (pats.empty()) return Outcome::unsat();
    for (const auto& p : pats) all_finite &= p.finite();
  }
  if (auto m = length_abstraction(inst)) return Outcome::sat(std::move(*m));

  Assignment sigma;
  const std::size_t layers = all_finite ? 0 : opt.iter_bound;
  for (std::size_t b = 0; b <= layers; ++b) {
    std::vector<std::size_t> alt(vars.size(), 0);
    while (true) {
      std::vector<const FlatPattern*> chosen;
      std::size_t m = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        chosen.push_back(&inst.langs.at(vars[i])[alt[i]]);
        m += chosen.back()->loops.size();
      }
      if (b == 0 || m > 0) {
        // Count vectors in [0, b]^m whose maximum is b (all zero when b == 0).
        std::vector<std::size_t> c(m, 0);
        while (true) {
          bool top = b == 0 || std::find(c.begin(), c.end(), b) != c.end();
          if (top) {
            opt.deadline.check();
            if (++st.checks > opt.max_checks) return Outcome::unknown("check-budget");
            std::size_t k = 0;
            for (std::size_t i = 0; i < vars.size(); ++i) {
              const auto n = chosen[i]->loops.size();
              sigma[vars[i]] = chosen[i]->instantiate(std::span(c).subspan(k, n));
              k += n;
            }
            if (!is_factor(evaluate(inst.needle, sigma), evaluate(inst.haystack, sigma))) {
              return Outcome::sat(sigma);
            }
          }
          std::size_t i = 0;
          while (i < m && c[i] == b) c[i++] = 0;
          if (i == m) break;
          ++c[i];
        }
      }
      std::size_t i = vars.size();
      while (i > 0 && ++alt[i - 1] == inst.langs.at(vars[i - 1]).size()) alt[--i] = 0;
      if (i == 0) break;
    }
  }
  if (all_finite) return Outcome::unsat();
  return Outcome::unknown("iter-bound");
}

// ---------------------------------------------------------------------------
// SMT-LIB export.

namespace detail {

inline std::string smt_symbol(const std::string& name) {
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) simple &= std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  return simple ? name : "|" + name + "|";
}

inline std::string smt_term(const Term& t, const Alphabet& alphabet) {
  std::vector<std::string> parts;
  for (const auto& item : canonical_term(t)) {
    parts.push_back(is_var(item) ? smt_symbol(var_name(item)) : "\"" + alphabet.decode(lit_word(item)) + "\"");
  }
  if (parts.empty()) return "\"\"";
  if (parts.size() == 1) return parts[0];
  std::string out = "(str.++";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

}  // namespace detail

inline void emit_smtlib(const Instance& inst, std::ostream& out) {
  out << "(set-logic QF_S)\n";
  for (const auto& x : inst.occurring_vars()) out << "(declare-const " << detail::smt_symbol(x) << " String)\n";
  for (const auto& x : inst.occurring_vars()) {
    out << "(assert (str.in_re " << detail::smt_symbol(x) << " " << dfa_to_smt_regex(inst.lang(x), inst.alphabet)
        << "))\n";
  }
  out << "(assert (not (str.contains " << detail::smt_term(inst.haystack, inst.alphabet) << " "
      << detail::smt_term(inst.needle, inst.alphabet) << ")))\n";
  out << "(check-sat)\n(get-model)\n";
  if (!out) throw Error("emit_smtlib: write failed");
}

}  // namespace notcontains
