#include "folasp/oracle.hpp"

#include <gtest/gtest.h>

#include "folasp/parse.hpp"
#include "folasp/validate.hpp"
#include "util.hpp"

namespace folasp {
namespace {

ModelExpansionProblem load(const std::string& text) {
  return validate_problem(parse_problem(text));
}

// A fully-interpreted problem doubles as an evaluation fixture: its own
// structure either satisfies the theory or not.
bool self_satisfies(const std::string& text) {
  ModelExpansionProblem m = load(text);
  return satisfies(m, m.structure).ok;
}

constexpr const char* kNumWorld = R"(
vocabulary {
  type Num
  P(Num)
  Next(Num) : Num
}
structure {
  Num = {1, 2, 3, 4}
  P = {1; 2; 3}
  Next = {1 -> 2; 2 -> 3; 3 -> 4; 4 -> 4}
}
theory {
}
)";

std::string with_theory(std::string sentence) {
  std::string t = kNumWorld;
  return t.substr(0, t.rfind("theory {\n}")) + "theory {\n  " + std::move(sentence) + "\n}\n";
}

TEST(TwoValued, ConnectivesAndQuantifiers) {
  EXPECT_TRUE(self_satisfies(with_theory("?x: P(x) & ~P(4).")));
  EXPECT_FALSE(self_satisfies(with_theory("!x: P(x).")));
  EXPECT_TRUE(self_satisfies(with_theory("!x: P(x) | x = 4.")));
  EXPECT_TRUE(self_satisfies(with_theory("P(1) => P(2).")));
  EXPECT_FALSE(self_satisfies(with_theory("P(1) <=> P(4).")));
  EXPECT_TRUE(self_satisfies(with_theory("true.")));
  EXPECT_FALSE(self_satisfies(with_theory("false.")));
}

TEST(TwoValued, FunctionsAndComparisons) {
  EXPECT_TRUE(self_satisfies(with_theory("Next(1) = 2.")));
  EXPECT_TRUE(self_satisfies(with_theory("!x: Next(x) >= x.")));
  EXPECT_TRUE(self_satisfies(with_theory("Next(Next(1)) = 3.")));
  EXPECT_FALSE(self_satisfies(with_theory("?x: Next(x) < x.")));
}

TEST(TwoValued, CardinalityCountsSatisfyingTuples) {
  EXPECT_TRUE(self_satisfies(with_theory("#{x: P(x)} = 3.")));
  EXPECT_TRUE(self_satisfies(with_theory("#{x: P(x) & ~P(Next(x))} = 1.")));
  EXPECT_TRUE(self_satisfies(with_theory("#{x[Num], y[Num]: x < y} = 6.")));
  EXPECT_FALSE(self_satisfies(with_theory("#{x: P(x)} =< 2.")));
}

TEST(WellFounded, StratifiedDefinitionIsTotal) {
  ModelExpansionProblem m = load(R"(
vocabulary { p q }
structure { }
theory { define { q <- true. p <- ~q. } }
)");
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::Total);
  EXPECT_EQ(wf.lower.at("q"), (std::set<Tuple>{Tuple{}}));
  EXPECT_EQ(wf.lower.at("p"), (std::set<Tuple>{}));
}

TEST(WellFounded, PositiveSelfLoopIsFalse) {
  ModelExpansionProblem m = load(R"(
vocabulary { p }
structure { }
theory { define { p <- p. } }
)");
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::Total);
  EXPECT_TRUE(wf.lower.at("p").empty());
}

TEST(WellFounded, NegativeSelfLoopIsThreeValued) {
  ModelExpansionProblem m = load(R"(
vocabulary { p }
structure { }
theory { define { p <- ~p. } }
)");
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::ThreeValued);
  EXPECT_TRUE(wf.lower.at("p").empty());
  EXPECT_EQ(wf.upper.at("p"), (std::set<Tuple>{Tuple{}}));
}

TEST(WellFounded, EvenOddOverSuccessorIsThreeValuedOnACycle) {
  // Next is cyclic, so Even(x) <- ~Even(Next(x)) never bottoms out.
  ModelExpansionProblem m = load(R"(
vocabulary {
  type Num
  Even(Num)
  Next(Num) : Num
}
structure {
  Num = {0, 1}
  Next = {0 -> 1; 1 -> 0}
}
theory {
  define { Even(x) <- ~Even(Next(x)). }
}
)");
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::ThreeValued);
}

TEST(WellFounded, SymmetricClosureDerivesBothDirections) {
  ModelExpansionProblem m = load(testutil::sample("gc.fod"));
  ASSERT_EQ(m.theory.definitions.size(), 1u);
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::Total);
  std::set<Tuple> want{{Value{"nl"}, Value{"be"}}, {Value{"be"}, Value{"nl"}},
                       {Value{"be"}, Value{"lux"}}, {Value{"lux"}, Value{"be"}}};
  EXPECT_EQ(wf.lower.at("SymBorder"), want);
}

TEST(Satisfies, ChecksDefinedPredicatesAgainstTheWellFoundedModel) {
  ModelExpansionProblem m = load(R"(
vocabulary { p q }
structure { }
theory { define { p <- q. } }
)");
  Structure good = m.structure;
  good.pred_interp["p"] = {};
  good.pred_interp["q"] = {};
  EXPECT_TRUE(satisfies(m, good).ok);
  Structure bad = good;
  bad.pred_interp["p"] = {Tuple{}};
  EXPECT_FALSE(satisfies(m, bad).ok);  // p true but q false: not derived
  Structure both = good;
  both.pred_interp["p"] = {Tuple{}};
  both.pred_interp["q"] = {Tuple{}};
  EXPECT_TRUE(satisfies(m, both).ok);
}

TEST(Bruteforce, SeparateDefinitionsAdmitTwoSolutions) {
  ModelExpansionProblem m = load(testutil::sample("two_defs.fod"));
  std::vector<Structure> sols = solve_bruteforce(m);
  ASSERT_EQ(sols.size(), 2u);
  // enumeration order: all-false first
  EXPECT_TRUE(sols[0].pred_interp.at("p").empty());
  EXPECT_TRUE(sols[0].pred_interp.at("q").empty());
  EXPECT_EQ(sols[1].pred_interp.at("p"), (std::vector<Tuple>{Tuple{}}));
  EXPECT_EQ(sols[1].pred_interp.at("q"), (std::vector<Tuple>{Tuple{}}));
}

TEST(Bruteforce, JointDefinitionHasUniqueSolution) {
  ModelExpansionProblem m = load(R"(
vocabulary { p q }
structure { }
theory { define { p <- q. q <- p. } }
)");
  std::vector<Structure> sols = solve_bruteforce(m);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_TRUE(sols[0].pred_interp.at("p").empty());
  EXPECT_TRUE(sols[0].pred_interp.at("q").empty());
}

TEST(Bruteforce, InterpretedSymbolCanContradictADefinition) {
  ModelExpansionProblem m = load(testutil::sample("fact_false.fod"));
  EXPECT_TRUE(solve_bruteforce(m).empty());
}

TEST(Bruteforce, GraphColoringHasExactlyTwoSolutions) {
  ModelExpansionProblem m = load(testutil::sample("gc.fod"));
  std::vector<Structure> sols = solve_bruteforce(m);
  ASSERT_EQ(sols.size(), 2u);

  std::vector<std::pair<Tuple, Value>> want_color{{{Value{"be"}}, Value{"red"}},
                                                  {{Value{"lux"}}, Value{"blue"}},
                                                  {{Value{"nl"}}, Value{"blue"}}};
  std::vector<Tuple> want_sym{{Value{"be"}, Value{"lux"}},
                              {Value{"be"}, Value{"nl"}},
                              {Value{"lux"}, Value{"be"}},
                              {Value{"nl"}, Value{"be"}}};
  bool found = false;
  for (const auto& s : sols) {
    EXPECT_EQ(s.pred_interp.at("SymBorder"), want_sym);
    found = found || s.func_interp.at("ColorOf") == want_color;
  }
  EXPECT_TRUE(found);
}

TEST(Bruteforce, EmptyTheoryAdmitsEveryExpansion) {
  ModelExpansionProblem m = load(testutil::sample("gc_relational.fod"));
  // 2^(9 SymBorder atoms + 6 ColorOf atoms)
  EXPECT_EQ(solve_bruteforce(m, 40000).size(), 32768u);
}

TEST(Bruteforce, ThrowsWhenSearchSpaceExceedsCap) {
  ModelExpansionProblem m = load(testutil::sample("gc_relational.fod"));
  EXPECT_THROW(solve_bruteforce(m, 1000), OracleError);
}

}  // namespace
}  // namespace folasp
