#include <gtest/gtest.h>

#include "common.hpp"
#include "gen.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/error.hpp"
#include "shaclup/json_io.hpp"

using namespace shaclup;

TEST(Ast, DerivedFormsExpandToPrimitives) {
  ShapePtr a = shape::cls("A"), b = shape::cls("B");
  EXPECT_TRUE(equal(shape::or_(a, b), shape::not_(shape::and_(shape::not_(a), shape::not_(b)))));
  PathPtr p = path::prop("p");
  EXPECT_TRUE(equal(shape::exists(p, a), shape::at_least(1, p, a)));
  EXPECT_TRUE(equal(shape::exists(p), shape::at_least(1, p, shape::top())));
  EXPECT_TRUE(equal(shape::forall(p, a), shape::not_(shape::at_least(1, p, shape::not_(a)))));
  EXPECT_TRUE(equal(shape::bottom(), shape::not_(shape::top())));
  EXPECT_TRUE(equal(path::singleton("a", "b"), path::pair(shape::node("a"), shape::node("b"))));
  EXPECT_TRUE(equal(shape::all_of({}), shape::top()));
  EXPECT_TRUE(equal(shape::any_of({}), shape::bottom()));
}

TEST(Ast, AtLeastZeroIsRejected) {
  EXPECT_ANY_THROW(shape::at_least(0, path::prop("p"), shape::top()));
}

TEST(Ast, InvertPushesToLeaves) {
  PathPtr e = path::seq(path::prop("p"), path::star(path::inverse("q")));
  PathPtr inv = path::invert(e);
  EXPECT_TRUE(equal(inv, path::seq(path::star(path::prop("q")), path::inverse("p"))));
  EXPECT_TRUE(equal(path::invert(inv), e));
}

TEST(Ast, RenderingUsesShortForms) {
  ShapePtr s = shape::or_(shape::cls("A"), shape::forall(path::prop("p"), shape::node("c")));
  std::string text = to_string(s);
  EXPECT_NE(text.find("|"), std::string::npos) << text;
  EXPECT_NE(text.find("forall"), std::string::npos) << text;
}

TEST(Ast, CanonicalizeRemovesDoubleNegation) {
  ShapePtr a = shape::cls("A");
  EXPECT_TRUE(equal(canonicalize(shape::not_(shape::not_(a))), a));
  ShapePtr nested = shape::exists(path::prop("p"), shape::not_(shape::not_(shape::not_(a))));
  EXPECT_TRUE(equal(canonicalize(nested), shape::exists(path::prop("p"), shape::not_(a))));
}

TEST(Ast, TreeSizeSaturatesOnSharedDag) {
  ShapePtr s = shape::cls("B");
  for (int i = 0; i < 80; ++i) s = shape::and_(s, s);
  auto g = graph::normal({{"s", s}}, target::all({}));
  EXPECT_EQ(tree_size(g), UINT64_MAX);
  EXPECT_LT(dag_size(g), 200u);
  EXPECT_EQ(count_occurrences(graph::normal({{"s", shape::and_(shape::cls("B"), shape::cls("B"))}},
                                            target::all({})),
                              "B"),
            2u);
}

TEST(Ast, VocabularyCollectsEverySort) {
  auto g = testing_support::hospital_shapes();
  Vocabulary v = vocabulary_of(g);
  EXPECT_EQ(v.classes, (std::set<std::string>{"ActivePatient", "DischargePatient", "Patient",
                                              "Physician"}));
  EXPECT_EQ(v.properties, (std::set<std::string>{"treatsPatient"}));
  EXPECT_EQ(v.shape_names, (std::set<std::string>{"PatientShape", "PhysicianShape"}));
  EXPECT_TRUE(v.nodes.empty());
}

TEST(JsonIo, ShapesRoundTrip) {
  gen::Rng r(11);
  for (int i = 0; i < 300; ++i) {
    auto g = gen::boolean_graph(r, gen::Options{}, 3, 3);
    auto back = shapes_graph_from_json(to_json(g));
    EXPECT_TRUE(equal(g, back)) << to_json(g).dump();
  }
}

TEST(JsonIo, ActionsRoundTrip) {
  gen::Rng r(12);
  for (int i = 0; i < 200; ++i) {
    Action a = gen::action(r, gen::Options{}, 3, 1);
    EXPECT_TRUE(equal(actions_from_json(to_json(a)), a)) << to_json(a).dump();
  }
}

TEST(JsonIo, MalformedInputIsSyntaxError) {
  auto kind = [](const char* text) {
    try {
      parse_shapes_graph(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind("{"), ErrorKind::Syntax);
  EXPECT_EQ(kind(R"({"constraints":[{"name":"s","body":{"type":"bogus"}}],"targets":[]})"),
            ErrorKind::Syntax);
  EXPECT_EQ(kind(R"({"constraints":[{"name":"s","body":{"type":"at_least","n":0,
                 "path":{"type":"prop","name":"p"}}}],"targets":[]})"),
            ErrorKind::Syntax);
  EXPECT_EQ(kind(R"({"constraints":[{"name":"s","body":{"type":"shape","name":"s"}}],"targets":[]})"),
            ErrorKind::RecursiveConstraints);
}

TEST(JsonIo, HospitalFileParses) {
  auto g = testing_support::hospital_shapes();
  ASSERT_EQ(g->kind, GraphKind::Normal);
  EXPECT_EQ(g->constraints.size(), 2u);
  EXPECT_EQ(g->targets->kind, TargetKind::And);
  EXPECT_EQ(g->targets->args.size(), 2u);
}
