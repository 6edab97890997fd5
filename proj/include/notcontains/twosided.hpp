#pragma once

// Elimination of non-flat variables occurring in both needle and haystack:
// each is replaced by a fresh separator letter, and models of the stripped
// instance are lifted back with a long aligned word from the variable's
// butterfly.

#include "notcontains/constraints.hpp"

namespace notcontains {

struct LiftEntry {
  std::string var;
  Symbol separator = 0;
  Butterfly butterfly;
  Word alpha;
  Word beta;
};

using LiftPlan = std::vector<LiftEntry>;

struct Stripped {
  Instance inst;
  LiftPlan plan;
};

inline Term replace_var(const Term& t, const std::string& x, const Word& by) {
  return substitute(t, std::map<std::string, Term>{{x, Term{Lit{by}}}});
}

/// Strips two-sided non-flat variables in lexicographic order.
inline Stripped strip_two_sided(const Instance& inst) {
  Stripped out{inst, {}};
  const auto in_needle = term_vars(inst.needle);
  const auto in_haystack = term_vars(inst.haystack);
  for (const auto& z : inst.occurring_vars()) {
    if (!in_needle.contains(z) || !in_haystack.contains(z)) continue;
    auto flat = classify_flatness(inst.lang(z));
    if (is_flat(flat)) continue;
    LiftEntry e;
    e.var = z;
    e.separator = out.inst.alphabet.add_separator();
    e.butterfly = std::get<Butterfly>(flat);
    auto ab = build_two_sided_alpha_beta(e.butterfly.u, e.butterfly.v);
    e.alpha = std::move(ab.alpha);
    e.beta = std::move(ab.beta);
    out.inst.needle = replace_var(out.inst.needle, z, Word{e.separator});
    out.inst.haystack = replace_var(out.inst.haystack, z, Word{e.separator});
    out.inst.langs.erase(z);
    out.plan.push_back(std::move(e));
  }
  return out;
}

/// Pieces of a term between the occurrences of z.
inline std::vector<Term> split_at(const Term& t, const std::string& z) {
  std::vector<Term> pieces(1);
  for (const auto& item : t) {
    if (is_var(item) && var_name(item) == z) {
      pieces.emplace_back();
    } else {
      pieces.back().push_back(item);
    }
  }
  return pieces;
}

/// Lifts a model of the stripped instance to the original, processing the
/// plan in reverse. Each stage is verified; a failure is an InternalError.
inline Assignment lift_model(const Instance& original, const LiftPlan& plan, const Assignment& model) {
  Assignment sigma = model;
  for (std::size_t k = plan.size(); k-- > 0;) {
    const auto& e = plan[k];
    // Stage instance: entries before k are still separators.
    Assignment stage = sigma;
    for (std::size_t j = 0; j < k; ++j) stage[plan[j].var] = Word{plan[j].separator};
    for (const auto& x : original.occurring_vars()) {
      if (x != e.var && !stage.contains(x)) throw Error("lift_model: model misses variable '" + x + "'");
    }
    std::size_t M = 0;
    for (const Term* t : {&original.needle, &original.haystack}) {
      for (const auto& piece : split_at(*t, e.var)) M = std::max(M, evaluate(piece, stage).size());
    }
    // The direct construction can fail when an outer needle piece runs on into
    // an adjacent copy of z (e.g. N = z ab, H = z z with gamma starting in ab).
    // Other words of p {u,v}* s are tried in a fixed order; each is verified.
    const auto swapped = build_two_sided_alpha_beta(e.butterfly.v, e.butterfly.u);
    const std::vector<Word> pads{{}, e.butterfly.u, e.butterfly.v};
    std::optional<Word> found;
    for (int orient = 0; orient < 2 && !found; ++orient) {
      const Word& alpha = orient == 0 ? e.alpha : swapped.alpha;
      const Word& beta = orient == 0 ? e.beta : swapped.beta;
      const auto r = choose_r(alpha, M, e.butterfly.prefix, e.butterfly.suffix);
      const Word gamma = build_gamma_two_sided(alpha, beta, r);
      for (std::size_t i = 0; i < pads.size() * pads.size() && !found; ++i) {
        Word wz = concat(e.butterfly.prefix, pads[i / pads.size()], gamma, pads[i % pads.size()], e.butterfly.suffix);
        if (!original.lang(e.var).accepts(wz)) throw InternalError("lift_model: lifted word outside the language");
        stage[e.var] = wz;
        if (!is_factor(evaluate(original.needle, stage), evaluate(original.haystack, stage))) found = std::move(wz);
      }
    }
    if (!found) throw InternalError("lift_model: lifted assignment violates the constraint");
    sigma[e.var] = std::move(*found);
  }
  if (!satisfies(original, sigma)) throw InternalError("lift_model: lifted model does not verify");
  return sigma;
}

}  // namespace notcontains
