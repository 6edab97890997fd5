#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"

using namespace notcontains;

namespace {

const Alphabet abc("abc");
Word W(const std::string& s) { return abc.encode(s); }
std::string S(const Word& w) { return abc.decode(w); }

Instance intro() {
  return parse_instance(R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ab)+"},{"name":"z","regex":"(a(b|c)c)*"}],
                            "needle":[{"lit":"ab"},{"var":"x"}],"haystack":[{"var":"x"},{"var":"z"}]})");
}

// All pattern words with every loop count at most k.
std::vector<Word> small_words(const FlatPattern& p, std::size_t k) {
  std::vector<Word> out;
  std::vector<std::size_t> c(p.loops.size(), 0);
  while (true) {
    out.push_back(p.instantiate(c));
    std::size_t i = 0;
    while (i < c.size() && c[i] == k) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  return out;
}

}  // namespace

TEST(DeadEnd, GoldenExample) {
  const Instance inst = intro();
  const Assignment partial{{"x", W("ab")}};
  EXPECT_TRUE(is_dead_end(inst, partial, "z", W("abca")));
  EXPECT_FALSE(is_dead_end(inst, partial, "z", W("acc")));
}

TEST(DeadEnd, AgreesWithExtensionsOracle) {
  // A dead end means no completion of z can satisfy the constraint; check the
  // contrapositive on short completions.
  const Instance inst = intro();
  const Assignment partial{{"x", W("ab")}};
  for (const auto& pre : oracle::words_up_to("abc", 4)) {
    if (!is_dead_end(inst, partial, "z", W(pre))) continue;
    for (const auto& rest : oracle::words_up_to("abc", 3)) {
      Assignment sigma = partial;
      sigma["z"] = W(pre + rest);
      ASSERT_TRUE(is_factor(evaluate(inst.needle, sigma), evaluate(inst.haystack, sigma))) << pre << "|" << rest;
    }
  }
}

TEST(Trees, EdgesOfTheIntroAutomaton) {
  auto ctx = make_gamma_ctx(intro(), "z", 1);
  EXPECT_EQ(ctx.q_uv(), State{1});
  EXPECT_EQ(S(ctx.gamma_z), "bcabcaccacca");

  auto root = tree_edges(ctx, Side::Prefix, 0);
  ASSERT_EQ(root.size(), 1u);
  EXPECT_EQ(S(root[0].label), "a");
  auto inner = tree_edges(ctx, Side::Prefix, 1);
  ASSERT_EQ(inner.size(), 2u);
  EXPECT_EQ(S(inner[0].label), "bca");
  EXPECT_EQ(S(inner[1].label), "cca");

  auto sroot = tree_edges(ctx, Side::Suffix, 0);
  ASSERT_EQ(sroot.size(), 1u);
  EXPECT_EQ(S(sroot[0].label), "c");
  EXPECT_EQ(sroot[0].to, State{2});
  auto sinner = tree_edges(ctx, Side::Suffix, 2);
  ASSERT_EQ(sinner.size(), 2u);
  EXPECT_EQ(S(sinner[0].label), "cab");
  EXPECT_EQ(S(sinner[1].label), "cac");
}

TEST(Trees, ReachingPaths) {
  auto ctx = make_gamma_ctx(intro(), "z", 1);
  // a, then two of {bca, cca}: length 7 reached after exactly two cycles.
  auto paths = build_tree(ctx, Side::Prefix, 7, 1000);
  std::set<std::string> labels;
  for (const auto& p : paths) labels.insert(S(p.label));
  EXPECT_EQ(labels, (std::set<std::string>{"abcabca", "abcacca", "accabca", "accacca"}));
  for (const auto& p : paths) {
    EXPECT_EQ(ctx.dfa.run(0, p.label), std::optional<State>(p.vertices.back()));
  }
  EXPECT_THROW(build_tree(ctx, Side::Prefix, 7, 3), CapExceeded);

  auto spaths = build_tree(ctx, Side::Suffix, 4, 1000);
  for (const auto& p : spaths) {
    ASSERT_GE(p.label.size(), 4u);
    auto end = ctx.dfa.run(p.vertices.back(), p.label);
    ASSERT_TRUE(end.has_value());
    EXPECT_TRUE(ctx.dfa.is_final(*end)) << S(p.label);
  }
  EXPECT_EQ(spaths.size(), 2u);  // c + {cab, cac}
}

TEST(Trees, PathsAreMinimalAndComplete) {
  // Every word of the prefix language of length >= bound has exactly one
  // reaching path among its prefixes, for the one-state automaton (a|b)*.
  const Alphabet ab("ab");
  Instance inst = parse_instance(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                                     "needle":[{"lit":"aa"}],"haystack":[{"var":"z"}]})");
  auto ctx = make_gamma_ctx(inst, "z", 1);
  for (std::size_t bound = 1; bound <= 6; ++bound) {
    auto paths = build_tree(ctx, Side::Prefix, bound, 100000);
    EXPECT_EQ(paths.size(), std::size_t{1} << bound);
    for (const auto& w : oracle::words_of_length("ab", bound)) {
      std::size_t hits = 0;
      for (const auto& p : paths) hits += ab.decode(p.label) == w;
      ASSERT_EQ(hits, 1u) << w;
    }
  }
}

TEST(Expansion, GammaExpand) {
  auto ctx = make_gamma_ctx(intro(), "z", 2);
  const Word gk = power(ctx.gamma_z, 2);
  EXPECT_EQ(gamma_expand(ctx, Side::Prefix, W("a")), concat(W("a"), gk));
  EXPECT_EQ(gamma_expand(ctx, Side::Prefix, W("")), concat(W("a"), gk));
  EXPECT_EQ(gamma_expand(ctx, Side::Suffix, W("c")), concat(gk, W("bc")));
  EXPECT_THROW(gamma_expand(ctx, Side::Prefix, W("b")), Error);
  // Expansions stay inside the language's prefixes and suffixes.
  for (const auto& p : build_tree(ctx, Side::Prefix, 6, 1000)) {
    EXPECT_EQ(ctx.dfa.run(0, gamma_expand(ctx, Side::Prefix, p.label)), std::optional<State>(ctx.q_uv()));
  }
}

TEST(Underapprox, PatternsDenoteSubsetsOfTheLanguage) {
  const Instance anchored = parse_instance(
      R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ab)*"},{"name":"z","regex":"(a(b|c)c)*"}],
          "needle":[{"lit":"c"},{"var":"x"},{"lit":"abac"}],"haystack":[{"var":"z"}]})");
  const Instance plain = parse_instance(
      R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ac)*"},{"name":"z","regex":"(a(b|c)c)*"}],
          "needle":[{"var":"x"}],"haystack":[{"lit":"b"},{"var":"z"}]})");
  for (const Instance* ip : {&anchored, &plain}) {
    const Instance& inst = *ip;
    for (std::size_t K0 : {2, 4, 6}) {
      Bounds b = Bounds::from_parameters(2, 3, 12);
      b.K0 = K0;
      b.G = 2;
      auto ctx = make_gamma_ctx(inst, "z", b.G);
      auto pref = underapprox_half(inst, ctx, Side::Prefix, b);
      auto suf = underapprox_half(inst, ctx, Side::Suffix, b);
      for (const auto& p : pref.incomplete) {
        for (const auto& w : small_words(p, 2)) ASSERT_EQ(ctx.dfa.run(0, w), std::optional<State>(ctx.q_uv()));
      }
      for (const auto& s : suf.incomplete) {
        for (const auto& w : small_words(s, 2)) {
          auto end = ctx.dfa.run(ctx.q_uv(), w);
          ASSERT_TRUE(end && ctx.dfa.is_final(*end)) << S(w);
        }
      }
      auto g = glue(pref, suf);
      EXPECT_FALSE(g.truncated);
      ASSERT_FALSE(g.patterns.empty());
      for (const auto& p : g.patterns) {
        for (const auto& w : small_words(p, 2)) ASSERT_TRUE(ctx.dfa.accepts(w)) << S(w);
      }
      // Every short word of the language is covered.
      const auto covered = oracle::pattern_words(g.patterns, b.K0 + b.p_aut - 1);
      for (const auto& w : enumerate_words(ctx.dfa, b.K0 + b.p_aut - 1)) EXPECT_TRUE(covered.contains(w)) << S(w);
    }
  }
}

TEST(Underapprox, FactorsOfPower) {
  const Dfa f = factors_of_power(W("ab"));
  for (const auto& w : oracle::words_up_to("abc", 6)) {
    const bool expected = w.empty() || oracle::factor(w, oracle::repeat("ab", 5));
    ASSERT_EQ(f.accepts(W(w)), expected) << w;
  }
}

TEST(Underapprox, NeedleAnchorResidue) {
  Instance inst = parse_instance(R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ab)*"},{"name":"z","regex":"(a(b|c)c)*"}],
                                     "needle":[{"lit":"c"},{"var":"x"},{"lit":"abac"}],"haystack":[{"var":"z"}]})");
  auto p = needle_anchor(inst, Side::Prefix);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->var, "x");
  EXPECT_EQ(S(p->base), "ab");
  EXPECT_EQ(S(p->residue), "c");  // "aba" continues (ab)^omega, "c" does not
  auto s = needle_anchor(inst, Side::Suffix);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(S(s->residue), "c");
}

TEST(Glue, MismatchAndTruncation) {
  const Instance inst = intro();
  Bounds b = Bounds::from_parameters(2, 3, 12);
  b.K0 = 7;
  b.G = 1;
  auto ctx = make_gamma_ctx(inst, "z", b.G);
  auto pref = underapprox_half(inst, ctx, Side::Prefix, b);
  auto suf = underapprox_half(inst, ctx, Side::Suffix, b);
  EXPECT_THROW(glue(suf, pref), Error);
  auto g = glue(pref, suf, 3);
  EXPECT_TRUE(g.truncated);
  EXPECT_EQ(g.patterns.size(), 3u);
}

TEST(GammaOverlap, ConflictsWithNeedleBases) {
  // gamma_z is primitive and longer than every needle base, so long overlaps
  // of its powers with powers of a different primitive word conflict.
  const Alphabet ab("ab");
  std::vector<std::string> bases;
  for (const auto& w : oracle::words_up_to("ab", 3)) {
    if (!w.empty() && oracle::primitive(w)) bases.push_back(w);
  }
  for (auto [u, v] : {std::pair{"a", "b"}, {"ab", "b"}, {"a", "ba"}, {"ab", "ba"}}) {
    for (const auto& base : bases) {
      const std::string g = ab.decode(build_gamma_z(ab.encode(u), ab.encode(v), base.size()));
      ASSERT_TRUE(oracle::primitive(g));
      ASSERT_GT(g.size(), base.size());
      const std::size_t need = g.size() + base.size() - std::gcd(g.size(), base.size());
      const Word left = ab.encode(oracle::repeat(g, 3));
      const Word right = ab.encode(oracle::repeat(base, 3 * g.size() / base.size() + 1));
      for (std::ptrdiff_t s = -static_cast<std::ptrdiff_t>(right.size()); s <= static_cast<std::ptrdiff_t>(left.size());
           ++s) {
        if (overlap_size(left.size(), right.size(), s) < need) continue;
        ASSERT_TRUE(alignment_conflict({left, right, s})) << g << " vs " << base << " @" << s;
      }
    }
  }
}
