// Reader, printer, and validation checks.
// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "folasp/ast.hpp"
#include "folasp/parse.hpp"
#include "folasp/print.hpp"
#include "folasp/validate.hpp"

namespace {

using namespace folasp;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string sample(const std::string& name) { return slurp(FOLASP_SAMPLE_DIR "/" + name); }

// A small vocabulary wrapper for formula-level tests.
ModelExpansionProblem with_theory(const std::string& theory_items) {
  std::string src =
      "vocabulary { type T type Num P(T) Q(T) R(T, T) p q F(T) : T }\n"
      "structure { T = {a, b} Num = {0, 1, 2} }\n"
      "theory { " + theory_items + " }\n";
  return parse_problem(src);
}

TEST(Parse, GraphColoringShape) {
  ModelExpansionProblem m = parse_problem(sample("gc.fod"));
  EXPECT_EQ(m.vocabulary.types, (std::vector<std::string>{"Country", "Color"}));
  EXPECT_EQ(m.vocabulary.predicates, (std::vector<std::string>{"Border", "SymBorder"}));
  EXPECT_EQ(m.vocabulary.functions, (std::vector<std::string>{"ColorOf"}));
  EXPECT_EQ(m.theory.sentences.size(), 1u);
  ASSERT_EQ(m.theory.definitions.size(), 1u);
  EXPECT_EQ(m.theory.definitions[0].rules.size(), 2u);
  EXPECT_EQ(m.structure.pred_interp.at("Border").size(), 2u);
  EXPECT_EQ(m.structure.type_interp.at("Color"),
            (std::vector<Value>{Value{std::string("red")}, Value{std::string("blue")}}));
}

TEST(Parse, RoundTripSamples) {
  for (const char* name :
       {"gc.fod", "gc_implication.fod", "gc_relational.fod", "two_defs.fod", "fact_false.fod"}) {
    ModelExpansionProblem m = parse_problem(sample(name));
    ModelExpansionProblem again = parse_problem(to_string(m));
    EXPECT_EQ(m, again) << name;
    // also after validation: printed form must re-parse to the validated AST
    ModelExpansionProblem v = validate_problem(m);
    EXPECT_EQ(validate_problem(parse_problem(to_string(v))), v) << name;
  }
}

TEST(Parse, PrecedenceAndScope) {
  ModelExpansionProblem m = with_theory("p | p & q. ~p & q. p => q => p. !x: P(x) | Q(x).");
  ASSERT_EQ(m.theory.sentences.size(), 4u);
  // | binds weaker than &
  const auto* o = std::get_if<Or>(&m.theory.sentences[0].node);
  ASSERT_NE(o, nullptr);
  EXPECT_NE(std::get_if<And>(&(*o->rhs).node), nullptr);
  // ~ binds tighter than &
  const auto* a = std::get_if<And>(&m.theory.sentences[1].node);
  ASSERT_NE(a, nullptr);
  EXPECT_NE(std::get_if<Not>(&(*a->lhs).node), nullptr);
  // => is right-associative
  const auto* i = std::get_if<Implies>(&m.theory.sentences[2].node);
  ASSERT_NE(i, nullptr);
  EXPECT_NE(std::get_if<Implies>(&(*i->rhs).node), nullptr);
  // quantifier scope extends maximally to the right
  const auto* q = std::get_if<Quant>(&m.theory.sentences[3].node);
  ASSERT_NE(q, nullptr);
  EXPECT_NE(std::get_if<Or>(&(*q->body).node), nullptr);
}

TEST(Parse, CardinalityAndIntegers) {
  ModelExpansionProblem m =
      with_theory("#{x[T] : P(x)} >= -2. !y[Num]: y =< 1 | y > 1.  // comment\n");
  ASSERT_EQ(m.theory.sentences.size(), 2u);
  const auto* c = std::get_if<Comparison>(&m.theory.sentences[0].node);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->op, CmpOp::Geq);
  const auto* card = std::get_if<Cardinality>(&c->lhs.node);
  ASSERT_NE(card, nullptr);
  EXPECT_EQ(card->bound[0].type, "T");
  EXPECT_EQ(std::get<IntConst>(c->rhs.node).value, -2);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_problem("vocabulary { type T type T } structure {} theory {}"), ParseError);
  EXPECT_THROW(with_theory("Foo(x)."), ParseError);          // undeclared symbol
  EXPECT_THROW(with_theory("P(x."), ParseError);             // syntax
  EXPECT_THROW(parse_problem("vocabulary { p } structure { q = true } theory {}"), ParseError);
  try {
    parse_problem("vocabulary {\n type T\n Foo(T)\n}\nstructure {}\ntheory { Bar(x). }");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 6);
    EXPECT_NE(std::string(e.what()).find("Bar"), std::string::npos);
  }
}

TEST(Validate, InfersTypesFromPositions) {
  ModelExpansionProblem m = validate_problem(parse_problem(sample("gc.fod")));
  const auto* q = std::get_if<Quant>(&m.theory.sentences[0].node);
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(q->var.type, "Country");  // c1 used as a Border argument
  // definition heads type their variables from the declared signature
  const auto& r = m.theory.definitions[0].rules[0];
  EXPECT_EQ(std::get<Variable>(r.head_args[0].node).type, "Country");
  // idempotent
  EXPECT_EQ(validate_problem(m), m);
}

TEST(Validate, ExplicitAnnotationWins) {
  ModelExpansionProblem m = validate_problem(with_theory("!x[T]: P(x)."));
  const auto* q = std::get_if<Quant>(&m.theory.sentences[0].node);
  EXPECT_EQ(q->var.type, "T");
  // conflicting positions
  EXPECT_THROW(validate_problem(with_theory("!x: P(x) & x >= 0 & x =< 2 & Q(x) & R(x, x) & "
                                            "#{y[Num] : y = x} = 1.")),
               ValidateError);
  // no information at all
  EXPECT_THROW(validate_problem(with_theory("!x: x = x.")), ValidateError);
  // conflicting inference: P gives T, numeric guard gives Num
  EXPECT_THROW(validate_problem(with_theory("!x: P(x) & #{y[Num] : x = y & Q(x)} = 0.")),
               ValidateError);
}

TEST(Validate, UniquifiesShadowedBinders) {
  ModelExpansionProblem m =
      validate_problem(with_theory("(?x: P(x)) & (?x: Q(x)). !x: P(x) => ?x: Q(x)."));
  const auto* a = std::get_if<And>(&m.theory.sentences[0].node);
  ASSERT_NE(a, nullptr);
  const auto* l = std::get_if<Quant>(&(*a->lhs).node);
  const auto* r = std::get_if<Quant>(&(*a->rhs).node);
  ASSERT_NE(l, nullptr);
  ASSERT_NE(r, nullptr);
  EXPECT_NE(l->var.name, r->var.name);
  EXPECT_EQ(validate_problem(m), m);  // renaming settles after one pass
}

TEST(Validate, StructureErrors) {
  // overlapping type interpretations violate the partition
  EXPECT_THROW(validate_problem(parse_problem(
                   "vocabulary { type A type B } structure { A = {x} B = {x} } theory {}")),
               ValidateError);
  // missing type interpretation
  EXPECT_THROW(validate_problem(parse_problem("vocabulary { type A } structure {} theory {}")),
               ValidateError);
  // non-total function
  EXPECT_THROW(validate_problem(parse_problem(
                   "vocabulary { type A F(A) : A } structure { A = {x, y} F = {x -> y} } "
                   "theory {}")),
               ValidateError);
  // value outside the declared column type
  EXPECT_THROW(validate_problem(parse_problem(
                   "vocabulary { type A type B P(A) } structure { A = {x} B = {y} P = {y} } "
                   "theory {}")),
               ValidateError);
}

TEST(Validate, ComparisonTyping) {
  // ordering on a non-integer type
  EXPECT_THROW(validate_problem(with_theory("!x[T], y[T]: x < y.")), ValidateError);
  // ordering on an all-integer type is fine
  EXPECT_NO_THROW(validate_problem(with_theory("!x[Num], y[Num]: x < y.")));
  // equality across distinct types
  EXPECT_THROW(validate_problem(with_theory("!x[T], y[Num]: x = y.")), ValidateError);
  // cardinality compares against integers only
  EXPECT_THROW(validate_problem(with_theory("!x[T]: #{y[T] : P(y)} = x.")), ValidateError);
  EXPECT_NO_THROW(validate_problem(with_theory("!x[Num]: #{y[T] : P(y)} = x.")));
  // free variable in a sentence
  EXPECT_THROW(validate_problem(parse_problem(
                   "vocabulary { type T P(T) } structure { T = {a} } theory { P(x). }")),
               Error);
  // rule body variable not bound by the head
  EXPECT_THROW(validate_problem(with_theory("define { P(x) <- R(x, y). }")), ValidateError);
}

TEST(FreeVariables, FirstOccurrenceOrder) {
  ModelExpansionProblem m = with_theory("!a[T], b[T], c[T]: R(b, a) | R(c, c).");
  // strip the three quantifiers
  const Formula* f = &m.theory.sentences[0];
  for (int i = 0; i < 3; ++i) f = &*std::get<Quant>(f->node).body;
  auto fv = free_variables(*f);
  ASSERT_EQ(fv.size(), 3u);
  EXPECT_EQ(fv[0].name, "b");
  EXPECT_EQ(fv[1].name, "a");
  EXPECT_EQ(fv[2].name, "c");
}

TEST(Print, ParenthesizesQuantifiersOutsideTailPosition) {
  ModelExpansionProblem m = with_theory("(!x: P(x)) | q. p & (?x: P(x)) & q.");
  for (const auto& f : m.theory.sentences) {
    std::string printed = to_string(f);
    ModelExpansionProblem again = with_theory(printed + ".");
    EXPECT_EQ(again.theory.sentences[0], f) << printed;
  }
}

}  // namespace
