#include <gtest/gtest.h>

#include "corpus.hpp"

using namespace notcontains;

namespace {

Instance make(const std::string& json) { return parse_instance(json); }

}  // namespace

TEST(TwoSided, StripReplacesBySeparator) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"},{"name":"x","regex":"a*"}],
                           "needle":[{"lit":"a"},{"var":"z"}],"haystack":[{"var":"z"},{"var":"x"},{"lit":"ab"}]})");
  auto s = strip_two_sided(inst);
  ASSERT_EQ(s.plan.size(), 1u);
  EXPECT_EQ(s.plan[0].var, "z");
  EXPECT_EQ(s.inst.alphabet.size(), 3u);
  EXPECT_TRUE(s.inst.alphabet.is_separator(s.plan[0].separator));
  EXPECT_FALSE(s.inst.langs.contains("z"));
  EXPECT_EQ(s.inst.occurring_vars(), std::set<std::string>{"x"});
  EXPECT_EQ(evaluate(s.inst.needle, {}), (Word{0, s.plan[0].separator}));
  EXPECT_EQ(s.plan[0].alpha.size(), s.plan[0].beta.size());
}

TEST(TwoSided, FlatAndOneSidedAreKept) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"},{"name":"x","regex":"(ab)*"}],
                           "needle":[{"var":"x"}],"haystack":[{"var":"z"},{"var":"x"}]})");
  EXPECT_TRUE(strip_two_sided(inst).plan.empty());
}

TEST(TwoSided, SplitAt) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                           "needle":[{"lit":"a"},{"var":"z"},{"lit":"b"},{"var":"z"}],"haystack":[{"var":"z"}]})");
  auto pieces = split_at(inst.needle, "z");
  ASSERT_EQ(pieces.size(), 3u);
  EXPECT_EQ(evaluate(pieces[0], {}), (Word{0}));
  EXPECT_EQ(evaluate(pieces[1], {}), (Word{1}));
  EXPECT_TRUE(pieces[2].empty());
}

TEST(TwoSided, LiftedModelsVerify) {
  corpus::Generator gen(404);
  std::size_t lifted = 0;
  for (int i = 0; i < 40; ++i) {
    Instance inst = document_from_json(gen.two_sided_instance()).inst;
    auto s = strip_two_sided(inst);
    ASSERT_EQ(s.plan.size(), 1u);
    auto o = brute_oracle(s.inst, 4);
    if (o.status != OracleStatus::Sat) continue;
    auto m = lift_model(inst, s.plan, o.model);
    EXPECT_TRUE(satisfies(inst, m)) << i;
    ++lifted;
  }
  EXPECT_GT(lifted, 10u);
}

TEST(TwoSided, TwoVariablesLiftInReverseOrder) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"y","regex":"(a|bb)*"},{"name":"z","regex":"(ab|b)*"}],
                           "needle":[{"var":"y"},{"lit":"a"},{"var":"z"}],
                           "haystack":[{"var":"z"},{"lit":"ba"},{"var":"y"}]})");
  auto s = strip_two_sided(inst);
  ASSERT_EQ(s.plan.size(), 2u);
  EXPECT_EQ(s.plan[0].var, "y");
  EXPECT_EQ(s.plan[1].var, "z");
  // The stripped instance is ground: #1 a #2 vs #2 ba #1, which holds.
  ASSERT_TRUE(s.inst.occurring_vars().empty());
  auto m = lift_model(inst, s.plan, {});
  EXPECT_TRUE(satisfies(inst, m));
}

TEST(TwoSided, LiftedWordHasTheGammaShape) {
  Instance inst = make(R"({"alphabet":"ab","vars":[{"name":"z","regex":"(a|b)*"}],
                           "needle":[{"lit":"b"},{"var":"z"}],"haystack":[{"var":"z"},{"lit":"ab"}]})");
  auto s = strip_two_sided(inst);
  auto m = lift_model(inst, s.plan, {});
  const auto& e = s.plan[0];
  const auto r = choose_r(e.alpha, 2, e.butterfly.prefix, e.butterfly.suffix);
  EXPECT_EQ(m.at("z"), concat(e.butterfly.prefix, build_gamma_two_sided(e.alpha, e.beta, r), e.butterfly.suffix));
  EXPECT_TRUE(satisfies(inst, m));
}
