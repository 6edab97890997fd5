#pragma once

// Gamma-expansions of a non-flat haystack variable z: prefix and suffix trees
// over choice states, bound-reaching paths, dead ends, and the flat
// underapproximation L'_z assembled from a prefix half and a suffix half.

#include <set>

#include "notcontains/budget.hpp"
#include "notcontains/constraints.hpp"

namespace notcontains {

enum class Side { Prefix, Suffix };

struct GammaCtx {
  std::string var;
  Dfa dfa;
  Butterfly butterfly;
  Word gamma_z;
  std::size_t K = 1;
  State final_state = 0;
  std::vector<std::vector<Transition>> preds;  // (symbol, source), sorted

  State q_uv() const { return butterfly.loop_state; }

  bool is_choice(Side side, State q) const {
    return side == Side::Prefix ? dfa.out_degree(q) > 1 : preds[q].size() > 1;
  }
};

inline GammaCtx make_gamma_ctx(const std::string& z, const Dfa& dfa, std::size_t max_base, std::size_t K) {
  auto finals = dfa.final_states();
  if (finals.size() != 1) throw Error("gamma context for '" + z + "' needs a single final state");
  GammaCtx ctx;
  ctx.var = z;
  ctx.dfa = dfa;
  ctx.butterfly = butterfly_at(dfa);
  ctx.gamma_z = build_gamma_z(ctx.butterfly.u, ctx.butterfly.v, max_base);
  ctx.K = K;
  ctx.final_state = finals[0];
  ctx.preds.resize(dfa.size());
  for (State q = 0; q < dfa.size(); ++q) {
    for (auto t : dfa.transitions(q)) ctx.preds[t.target].push_back({t.symbol, q});
  }
  for (auto& p : ctx.preds) std::sort(p.begin(), p.end());
  return ctx;
}

inline GammaCtx make_gamma_ctx(const Instance& inst, const std::string& z, std::size_t K) {
  return make_gamma_ctx(z, inst.lang(z), max_needle_base(inst), K);
}

// ---------------------------------------------------------------------------
// Trees.

struct TreeEdge {
  Word label;  // in reading order
  State to = 0;
};

/// Edges leaving a tree vertex labelled q. On the prefix side an edge follows
/// a transition of q and then the deterministic continuation up to the next
/// choice state; the suffix side is the same on reversed transitions.
inline std::vector<TreeEdge> tree_edges(const GammaCtx& ctx, Side side, State q) {
  std::vector<TreeEdge> out;
  const std::size_t limit = ctx.dfa.size() + 1;
  if (side == Side::Prefix) {
    for (auto t : ctx.dfa.transitions(q)) {
      TreeEdge e{{t.symbol}, t.target};
      std::size_t steps = 0;
      while (ctx.dfa.out_degree(e.to) == 1 && steps++ < limit) {
        auto next = ctx.dfa.transitions(e.to)[0];
        e.label.push_back(next.symbol);
        e.to = next.target;
      }
      if (ctx.dfa.out_degree(e.to) > 1) out.push_back(std::move(e));
    }
  } else {
    for (auto t : ctx.preds[q]) {
      TreeEdge e{{t.symbol}, t.target};
      std::size_t steps = 0;
      while (ctx.preds[e.to].size() == 1 && steps++ < limit) {
        auto prev = ctx.preds[e.to][0];
        e.label.insert(e.label.begin(), prev.symbol);
        e.to = prev.target;
      }
      if (ctx.preds[e.to].size() > 1) out.push_back(std::move(e));
    }
  }
  return out;
}

struct ReachingPath {
  std::vector<State> vertices;
  Word label;  // prefix side: read from the initial state; suffix side: read into the final state
};

/// All bound-reaching paths, depth-first in edge order. Throws CapExceeded
/// ("path-cap") beyond path_cap paths.
inline std::vector<ReachingPath> build_tree(const GammaCtx& ctx, Side side, std::size_t bound, std::size_t path_cap,
                                            const Deadline& deadline = {}) {
  std::vector<ReachingPath> out;
  std::map<State, std::vector<TreeEdge>> memo;
  auto edges = [&](State q) -> const std::vector<TreeEdge>& {
    auto it = memo.find(q);
    if (it == memo.end()) it = memo.emplace(q, tree_edges(ctx, side, q)).first;
    return it->second;
  };
  ReachingPath cur;
  cur.vertices.push_back(side == Side::Prefix ? ctx.dfa.initial() : ctx.final_state);
  auto dfs = [&](auto&& self) -> void {
    deadline.check();
    for (const auto& e : edges(cur.vertices.back())) {
      ReachingPath next = cur;
      next.vertices.push_back(e.to);
      if (side == Side::Prefix) {
        append(next.label, e.label);
      } else {
        next.label.insert(next.label.begin(), e.label.begin(), e.label.end());
      }
      if (next.label.size() >= bound) {
        if (out.size() >= path_cap) throw CapExceeded("path-cap");
        out.push_back(std::move(next));
      } else {
        std::swap(cur, next);
        self(self);
        std::swap(cur, next);
      }
    }
  };
  dfs(dfs);
  return out;
}

// ---------------------------------------------------------------------------
// Expansions and dead ends.

/// Prefix: context . con(q_p, q_uv) . gamma^K. Suffix: gamma^K . con(q_uv, q_s) . context.
inline Word gamma_expand(const GammaCtx& ctx, Side side, std::span<const Symbol> context) {
  const Word gk = power(ctx.gamma_z, ctx.K);
  if (side == Side::Prefix) {
    auto q = ctx.dfa.run(ctx.dfa.initial(), context);
    if (!q) throw Error("gamma_expand: context is not a prefix of the language");
    return concat(context, connector(ctx.dfa, *q, ctx.q_uv()), gk);
  }
  for (State q = 0; q < ctx.dfa.size(); ++q) {
    auto r = ctx.dfa.run(q, context);
    if (r && ctx.dfa.is_final(*r)) return concat(gk, connector(ctx.dfa, ctx.q_uv(), q), context);
  }
  throw Error("gamma_expand: context is not a suffix of the language");
}

/// True iff the partial assignment extended by z -> prefix.# (a fresh letter)
/// already violates the constraint.
inline bool is_dead_end(const Instance& inst, const Assignment& partial, const std::string& z,
                        std::span<const Symbol> prefix) {
  Assignment sigma = partial;
  Word w(prefix.begin(), prefix.end());
  w.push_back(static_cast<Symbol>(inst.alphabet.size()));
  sigma[z] = std::move(w);
  return is_factor(evaluate(inst.needle, sigma), evaluate(inst.haystack, sigma));
}

// ---------------------------------------------------------------------------
// Underapproximation.

struct GammaCaps {
  std::size_t path_cap = 100000;
  std::size_t pattern_cap = 50000;
  Deadline deadline;
};

struct GlueHalf {
  std::string var;
  Side side = Side::Prefix;
  State q_uv = 0;
  Word gamma_power;  // gamma_z^G
  std::vector<FlatPattern> complete;
  /// Prefix side: contexts c with c.gamma^G an entry (c leads to q_uv).
  /// Suffix side: contexts c with gamma^G.c an entry (c leads from q_uv).
  std::vector<FlatPattern> incomplete;
};

/// Long flat needle variable at the relevant end of the needle, its Base and
/// the residue W of the adjacent literal.
struct NeedleAnchor {
  std::string var;
  Word base;
  Word residue;
};

inline std::optional<NeedleAnchor> needle_anchor(const Instance& inst, Side side) {
  const Term n = canonical_term(inst.needle);
  std::optional<std::size_t> pos;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (is_var(n[i]) && (!pos || side == Side::Prefix)) pos = i;
  }
  if (!pos || !star_loop_word(inst.lang(var_name(n[*pos])))) return std::nullopt;
  NeedleAnchor a{var_name(n[*pos]), base(inst, var_name(n[*pos])), {}};
  const std::size_t k = a.base.size();
  if (side == Side::Prefix) {
    Word lit = *pos + 1 < n.size() ? lit_word(n[*pos + 1]) : Word{};
    std::size_t m = 0;
    while (m < lit.size() && lit[m] == a.base[m % k]) ++m;
    a.residue.assign(lit.begin() + static_cast<std::ptrdiff_t>(m), lit.end());
  } else {
    Word lit = *pos > 0 ? lit_word(n[*pos - 1]) : Word{};
    std::size_t m = 0;
    while (m < lit.size() && lit[lit.size() - 1 - m] == a.base[k - 1 - (m % k)]) ++m;
    a.residue.assign(lit.begin(), lit.end() - static_cast<std::ptrdiff_t>(m));
  }
  return a;
}

/// Factors of base^+ (including the empty word): a cycle with every state initial and final.
inline Dfa factors_of_power(const Word& base) {
  Nfa nfa;
  for (std::size_t i = 0; i < base.size(); ++i) nfa.add_state();
  for (State i = 0; i < base.size(); ++i) {
    nfa.add_transition(i, base[i], static_cast<State>((i + 1) % base.size()));
    nfa.add_initial(i);
    nfa.set_final(i);
  }
  return *canonical_dfa(nfa);
}

namespace detail {

inline std::vector<FlatPattern> flat_patterns_of(const std::optional<Dfa>& dfa, std::size_t cap) {
  if (!dfa) return {};
  auto c = classify_flatness(*dfa, cap);
  if (!is_flat(c)) throw InternalError("factor intersection is not flat");
  return std::get<FlatDecomposition>(c).patterns;
}

// Letters continuing inside factors(base^+) at each state, over all reachable
// (offset, state) pairs. Prefix side reads forward from the initial state;
// suffix side reads backward from the final state and records the letter
// preceding the offset.
inline std::vector<std::set<Symbol>> continuation_letters(const GammaCtx& ctx, Side side, const Word& base) {
  const std::size_t k = base.size();
  std::set<std::pair<std::size_t, State>> seen;
  std::vector<std::pair<std::size_t, State>> stack;
  for (std::size_t i = 0; i < k; ++i) {
    auto s = std::make_pair(i, side == Side::Prefix ? ctx.dfa.initial() : ctx.final_state);
    if (seen.insert(s).second) stack.push_back(s);
  }
  std::vector<std::set<Symbol>> letters(ctx.dfa.size());
  while (!stack.empty()) {
    auto [i, q] = stack.back();
    stack.pop_back();
    if (side == Side::Prefix) {
      letters[q].insert(base[i]);
      if (auto r = ctx.dfa.step(q, base[i])) {
        auto s = std::make_pair((i + 1) % k, *r);
        if (seen.insert(s).second) stack.push_back(s);
      }
    } else {
      const std::size_t j = (i + k - 1) % k;
      letters[q].insert(base[j]);
      for (auto t : ctx.preds[q]) {
        if (t.symbol != base[j]) continue;
        auto s = std::make_pair(j, t.target);
        if (seen.insert(s).second) stack.push_back(s);
      }
    }
  }
  return letters;
}

}  // namespace detail

/// One half of L'_z:
///  (a) every word of L_z shorter than K0 + p_aut (complete);
///  (b) the Gamma-expansion of every K0-reaching tree path (incomplete);
///  (c) factors(alpha^+) intersected with L_z, alpha the Base of the anchor variable (complete);
///  (d) factor words leading to a tree vertex, followed by an exit edge matching
///      the residue W and a connector to q_uv (incomplete).
inline GlueHalf underapprox_half(const Instance& inst, const GammaCtx& ctx, Side side, const Bounds& bounds,
                                 const GammaCaps& caps = {}, std::size_t* path_count = nullptr) {
  GlueHalf half;
  half.var = ctx.var;
  half.side = side;
  half.q_uv = ctx.q_uv();
  half.gamma_power = power(ctx.gamma_z, bounds.G);
  const Dfa& dfa = ctx.dfa;
  const State quv = ctx.q_uv();
  std::set<FlatPattern> seen_complete, seen_incomplete;
  auto add = [&](std::vector<FlatPattern>& dst, std::set<FlatPattern>& seen, FlatPattern p) {
    caps.deadline.check();
    if (!seen.insert(p).second) return;
    if (half.complete.size() + half.incomplete.size() >= caps.pattern_cap) throw CapExceeded("pattern-cap");
    dst.push_back(std::move(p));
  };

  // (a)
  const std::size_t fin_len = bounds.K0 + bounds.p_aut;
  for (auto& w : enumerate_words(dfa, fin_len == 0 ? 0 : fin_len - 1, caps.pattern_cap)) {
    add(half.complete, seen_complete, FlatPattern::literal(std::move(w)));
  }

  // (b)
  auto paths = build_tree(ctx, side, bounds.K0, caps.path_cap, caps.deadline);
  if (path_count) *path_count += paths.size();
  for (const auto& path : paths) {
    const State end = path.vertices.back();
    Word c = side == Side::Prefix ? concat(path.label, connector(dfa, end, quv))
                                  : concat(connector(dfa, quv, end), path.label);
    add(half.incomplete, seen_incomplete, FlatPattern::literal(std::move(c)));
  }

  auto anchor = needle_anchor(inst, side);
  if (!anchor) return half;
  const Dfa factors = factors_of_power(anchor->base);

  // (c)
  for (auto& p : detail::flat_patterns_of(intersect(factors, dfa), caps.pattern_cap)) {
    add(half.complete, seen_complete, std::move(p));
  }

  // (d)
  const Word& W = anchor->residue;
  const auto cont = detail::continuation_letters(ctx, side, anchor->base);
  for (State q = 0; q < dfa.size(); ++q) {
    const State root = side == Side::Prefix ? dfa.initial() : ctx.final_state;
    if (q != root && !ctx.is_choice(side, q)) continue;
    auto restricted = side == Side::Prefix ? rerooted(dfa, dfa.initial(), {q}) : rerooted(dfa, q, {ctx.final_state});
    if (!restricted) continue;
    const auto factor_part = detail::flat_patterns_of(intersect(factors, *restricted), caps.pattern_cap);
    if (factor_part.empty()) continue;

    std::vector<TreeEdge> exits;
    if (W.empty()) {
      for (auto& e : tree_edges(ctx, side, q)) {
        const Symbol first = side == Side::Prefix ? e.label.front() : e.label.back();
        const auto& c = cont[q];
        if (std::any_of(c.begin(), c.end(), [&](Symbol a) { return a != first; })) exits.push_back(std::move(e));
      }
    } else if (side == Side::Prefix) {
      if (auto r = dfa.run(q, W)) {
        TreeEdge e{W, *r};
        std::size_t steps = 0;
        while (dfa.out_degree(e.to) == 1 && steps++ <= dfa.size()) {
          auto t = dfa.transitions(e.to)[0];
          e.label.push_back(t.symbol);
          e.to = t.target;
        }
        exits.push_back(std::move(e));
      }
    } else {
      for (State r = 0; r < dfa.size(); ++r) {
        auto end = dfa.run(r, W);
        if (!end || *end != q) continue;
        TreeEdge e{W, r};
        std::size_t steps = 0;
        while (ctx.preds[e.to].size() == 1 && steps++ <= dfa.size()) {
          auto t = ctx.preds[e.to][0];
          e.label.insert(e.label.begin(), t.symbol);
          e.to = t.target;
        }
        exits.push_back(std::move(e));
      }
    }
    for (const auto& e : exits) {
      for (const auto& fp : factor_part) {
        FlatPattern entry = side == Side::Prefix
                                ? concat_patterns(fp, concat(e.label, connector(dfa, e.to, quv)), FlatPattern{})
                                : concat_patterns(FlatPattern{}, concat(connector(dfa, quv, e.to), e.label), fp);
        add(half.incomplete, seen_incomplete, std::move(entry));
      }
    }
  }
  return half;
}

struct GlueResult {
  std::vector<FlatPattern> patterns;
  bool truncated = false;
};

/// P_w u S_w u { p . gamma^G . s }. Stops at `pattern_cap` patterns and marks
/// the result truncated; every pattern denotes a subset of L_z.
inline GlueResult glue(const GlueHalf& pref, const GlueHalf& suf, std::size_t pattern_cap = 50000) {
  if (pref.side != Side::Prefix || suf.side != Side::Suffix || pref.var != suf.var || pref.q_uv != suf.q_uv ||
      pref.gamma_power != suf.gamma_power) {
    throw Error("glue: halves come from different contexts");
  }
  GlueResult out;
  std::set<FlatPattern> seen;
  auto add = [&](FlatPattern p) {
    if (seen.contains(p)) return true;
    if (out.patterns.size() >= pattern_cap) {
      out.truncated = true;
      return false;
    }
    seen.insert(p);
    out.patterns.push_back(std::move(p));
    return true;
  };
  for (const auto& p : pref.complete) {
    if (!add(p)) return out;
  }
  for (const auto& s : suf.complete) {
    if (!add(s)) return out;
  }
  for (const auto& p : pref.incomplete) {
    for (const auto& s : suf.incomplete) {
      if (!add(concat_patterns(p, pref.gamma_power, s))) return out;
    }
  }
  return out;
}

}  // namespace notcontains
