#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace notcontains;

namespace {

const Alphabet abc("abc");

Dfa D(const std::string& re) { return *regex_dfa(re, abc); }
Word W(const std::string& s) { return abc.encode(s); }

Instance make(const std::string& json) { return parse_instance(json); }

// Words of an alternative's term with every slot ranging over words up to n.
std::set<Word> alternative_words(const Alternative& alt, std::size_t n) {
  std::set<Word> out;
  std::vector<std::string> slots;
  std::vector<std::vector<Word>> choices;
  for (const auto& [name, dfa] : alt.slots) {
    slots.push_back(name);
    choices.push_back(enumerate_words(dfa, n));
  }
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    Assignment sigma;
    bool ok = true;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (choices[i].empty()) ok = false;
      else sigma[slots[i]] = choices[i][idx[i]];
    }
    if (!ok) return out;
    Word w = evaluate(alt.term, sigma);
    if (w.size() <= n) out.insert(w);
    std::size_t i = slots.size();
    while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace

TEST(Terms, CanonicalAndSubstitute) {
  Term t{Lit{W("a")}, Lit{W("")}, Lit{W("b")}, VarRef{"x"}, Lit{W("")}, VarRef{"y"}, Lit{W("c")}};
  Term c = canonical_term(t);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(lit_word(c[0]), W("ab"));
  EXPECT_EQ(occurrences(t, "x"), 1u);
  EXPECT_EQ(term_vars(t), (std::set<std::string>{"x", "y"}));
  EXPECT_FALSE(is_ground(t));

  Term s = substitute(t, Assignment{{"x", W("c")}});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(lit_word(s[0]), W("abc"));
  EXPECT_EQ(evaluate(t, {{"x", W("a")}, {"y", W("bb")}}), W("abab" "bc"));
  EXPECT_THROW(evaluate(t, {{"x", W("a")}}), Error);
}

TEST(Instances, Satisfies) {
  Instance inst = make(R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ab)+"},{"name":"z","regex":"(a(b|c)c)*"}],
                           "needle":[{"lit":"ab"},{"var":"x"}],"haystack":[{"var":"x"},{"var":"z"}]})");
  EXPECT_TRUE(satisfies(inst, {{"x", W("ab")}, {"z", W("acc")}}));
  EXPECT_FALSE(satisfies(inst, {{"x", W("ab")}, {"z", W("abc")}}));   // abab in ababc
  EXPECT_FALSE(satisfies(inst, {{"x", W("ba")}, {"z", W("acc")}}));   // x outside its language
  EXPECT_FALSE(verify_model(inst, {{"x", W("ab")}}));                  // z unassigned
}

TEST(Normalization, DecomposeMatchesLanguage) {
  for (const std::string re : {"a*|ba*", "a*b*", "(ab)*c(ba)*", "ab|ba", "(a|b)*c", "c(a(b|c)c)*a", "(ab)+",
                               "a*(b|c)a*", "((a|b)c)*b(ab)*", "(abc)*", "(a|b)*"}) {
    const Dfa d = D(re);
    auto alts = decompose_variable("x", d);
    std::set<Word> got;
    for (const auto& alt : alts) {
      for (const auto& [name, slot] : alt.slots) {
        ASSERT_TRUE(is_decomposed(slot)) << re << " slot " << name;
        auto f = classify_flatness(slot);
        if (is_flat(f)) {
          ASSERT_TRUE(star_loop_word(slot).has_value()) << re << " slot " << name;
        }
      }
      auto ws = alternative_words(alt, 7);
      got.insert(ws.begin(), ws.end());
    }
    std::set<Word> expected;
    for (const auto& w : enumerate_words(d, 7)) expected.insert(w);
    EXPECT_EQ(got, expected) << re;
  }
}

TEST(Normalization, StarAndNonFlatKeepTheirName) {
  auto a = decompose_variable("x", D("(ab)*"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(a[0].slots.contains("x"));
  auto b = decompose_variable("z", D("(a(b|c)c)*"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(b[0].slots.contains("z"));
}

TEST(Normalization, UnionGivesOneAlternativePerPath) {
  // a*|ba* minimizes to q0 -a,b-> q1 with an a-loop on q1: epsilon, a.(a)*, b.(a)*.
  auto alts = decompose_variable("x", *regex_dfa("a*|ba*", Alphabet("ab")));
  EXPECT_EQ(alts.size(), 3u);
}

TEST(Normalization, TrivialModelForHoldingGroundDisjunct) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"b|ab"}],
                           "needle":[{"var":"x"}],"haystack":[{"lit":"aa"}]})");
  auto n = normalize(inst);
  ASSERT_TRUE(n.trivial_model.has_value());
  EXPECT_TRUE(satisfies(inst, *n.trivial_model));
}

TEST(Normalization, DisjunctModelsReconstruct) {
  Instance inst = make(R"({"alphabet":"abc","vars":[{"name":"x","regex":"a*(b|c)a*"},{"name":"y","regex":"(ab)*c|b"}],
                           "needle":[{"var":"x"},{"var":"y"}],"haystack":[{"var":"y"},{"lit":"a"},{"var":"x"}]})");
  auto n = normalize(inst);
  ASSERT_GT(n.disjuncts.size(), 1u);
  std::size_t models = 0;
  for (const auto& d : n.disjuncts) {
    auto o = brute_oracle(d.inst, 4);
    if (o.status != OracleStatus::Sat) continue;
    ++models;
    EXPECT_TRUE(satisfies(inst, reconstruct(d, o.model)));
  }
  EXPECT_GT(models, 0u);
}

TEST(Normalization, CapRaises) {
  Instance inst = make(R"({"alphabet":"abc","vars":[{"name":"x","regex":"a*b*c*"},{"name":"y","regex":"a*b*c*"}],
                           "needle":[{"var":"x"}],"haystack":[{"var":"y"}]})");
  EXPECT_THROW(normalize(inst, 3), CapExceeded);
}

TEST(Bounds, Formulas) {
  auto b = Bounds::from_parameters(3, 4, 2);
  EXPECT_EQ(b.K0, 2u * 2 * 4 + 3);
  EXPECT_EQ(b.N0, b.K0 + 4 * 2 + 4);
  EXPECT_EQ(b.G, b.N0 + 2 * 2 + 2 * 3);
  auto s = b.scaled(0.2);
  EXPECT_EQ(s.K0, 3u);  // floor(0.2 * 19)
  EXPECT_EQ(s.N0, 6u);  // floor(0.2 * 31)
  EXPECT_EQ(s.G, 8u);   // floor(0.2 * 41)
  auto t = Bounds::from_parameters(0, 1, 0).scaled(0.1);
  EXPECT_EQ(t.K0, 2u);
  EXPECT_EQ(t.N0, 3u);
  EXPECT_EQ(t.G, 4u);
}

TEST(Bounds, ComputedFromInstance) {
  Instance inst = make(R"({"alphabet":"abc","vars":[{"name":"x","regex":"(ab)*"},{"name":"z","regex":"(a(b|c)c)*"}],
                           "needle":[{"lit":"ab"},{"var":"x"}],"haystack":[{"var":"z"},{"lit":"cab"}]})");
  EXPECT_EQ(base(inst, "x"), W("ab"));
  EXPECT_EQ(max_needle_base(inst), 2u);
  EXPECT_EQ(longest_literal(inst.haystack), 3u);
  EXPECT_EQ(haystack_nonflat_vars(inst), std::vector<std::string>{"z"});
  // gamma_z = u^(2+k) v^2 with u = bca, v = cca and |gamma_z| > 2: k = 0.
  EXPECT_EQ(gamma_word(inst, "z"), W("bcabcaccacca"));
  const std::size_t p_prim = 12, p_aut = 3, p_lit = 3;
  EXPECT_EQ(compute_bounds(inst), Bounds::from_parameters(p_lit, p_aut, p_prim));

  Instance abab = make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"(abab)*"}],
                           "needle":[{"var":"x"}],"haystack":[{"lit":"b"}]})");
  EXPECT_EQ(base(abab, "x"), abab.alphabet.encode("ab"));
  Instance nonstar = make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"a*b"}],
                              "needle":[{"var":"x"}],"haystack":[{"lit":"b"}]})");
  EXPECT_THROW(base(nonstar, "x"), Error);
}

TEST(Classify, Fragments) {
  // |N| can exceed |H|.
  auto a = classify(make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"a+"}],
                             "needle":[{"var":"x"},{"lit":"b"}],"haystack":[{"lit":"ab"}]})"));
  EXPECT_EQ(a.fragment, Fragment::EasyLengthSat);

  // x only in the needle, infinite: pumped past the haystack. Lengths alone fail since y matches.
  Instance nb = make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"a*"},{"name":"y","regex":"a*"}],
                        "needle":[{"var":"x"}],"haystack":[{"var":"y"}]})");
  auto b = classify(nb);
  EXPECT_TRUE(b.fragment == Fragment::EasyLengthSat || b.fragment == Fragment::NeedleOnlyNonFlatSat);
  ASSERT_TRUE(b.model.has_value());
  EXPECT_TRUE(satisfies(nb, *b.model));

  auto c = classify(make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"(ab)*"}],
                             "needle":[{"lit":"ab"}],"haystack":[{"var":"x"},{"lit":"ab"}]})"));
  EXPECT_EQ(c.fragment, Fragment::EasyAllFlat);

  auto d = classify(make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                             "needle":[{"lit":"a"},{"var":"z"}],"haystack":[{"var":"z"},{"lit":"ab"}]})"));
  EXPECT_EQ(d.fragment, Fragment::HardTwoSided);

  auto e = classify(make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                             "needle":[{"lit":"a"}],"haystack":[{"var":"z"},{"lit":"a"}]})"));
  EXPECT_EQ(e.fragment, Fragment::HardHaystackOnly);
}

TEST(Refute, Syntactic) {
  Instance i = make(R"({"alphabet":"ab","vars":[{"name":"x","regex":"(a|b)*"}],
                        "needle":[{"lit":"a"},{"var":"x"}],"haystack":[{"lit":"ba"},{"var":"x"},{"lit":"b"}]})");
  EXPECT_TRUE(syntactically_contained(i.needle, i.haystack));
  EXPECT_FALSE(syntactically_contained(i.haystack, i.needle));
}

TEST(Refute, GroundNeedleMatchesOracle) {
  // Needle "ab": the haystack z.a with z in b*a* always ends in a and never contains ab iff z has no ab.
  Instance sat = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                          "needle":[{"lit":"ab"}],"haystack":[{"var":"z"},{"lit":"a"}]})");
  auto r = check_ground_needle(sat);
  EXPECT_FALSE(r.refuted);
  ASSERT_TRUE(r.model.has_value());
  EXPECT_TRUE(satisfies(sat, *r.model));

  Instance unsat = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(ab)+"}],
                            "needle":[{"lit":"ab"}],"haystack":[{"var":"z"}]})");
  EXPECT_TRUE(check_ground_needle(unsat).refuted);

  // Two occurrences of the same variable: independent treatment may not refute.
  Instance twice = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"a|b"}],
                            "needle":[{"lit":"ab"}],"haystack":[{"var":"z"},{"var":"z"}]})");
  auto t = check_ground_needle(twice);
  EXPECT_FALSE(t.refuted);
  if (t.model) {
    EXPECT_TRUE(satisfies(twice, *t.model));
  }
}
