#include <gtest/gtest.h>

#include "common.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/regression.hpp"
#include "shaclup/shapes_graph.hpp"

using namespace shaclup;
using testing_support::hospital_graph;
using testing_support::hospital_shapes;
using testing_support::load_action;
using testing_support::with_all_nodes;

namespace {

ShapePtr node(const char* n) { return shape::node(n); }
ShapePtr cls(const char* n) { return shape::cls(n); }
PathPtr treats() { return path::prop("treatsPatient"); }

ShapePtr patient_body() {
  return shape::or_(shape::and_(cls("ActivePatient"), shape::not_(node("p2"))),
                    shape::or_(cls("DischargePatient"), node("p2")));
}

ShapesGraphPtr example_four() {
  ShapePtr physician =
      shape::or_(shape::and_(cls("Physician"), shape::not_(shape::forall(treats(), node("p2")))),
                 shape::exists(treats(), shape::and_(cls("ActivePatient"), shape::not_(node("p2")))));
  return graph::normal({{"PatientShape", patient_body()}, {"PhysicianShape", physician}},
                       target::all({target::atom(cls("Patient"), "PatientShape"),
                                    target::atom(shape::exists(treats()), "PhysicianShape")}));
}

PathPtr cleanup_path() {
  return path::diff(treats(), path::pair(shape::exists(treats(), node("p2")), node("p2")));
}

// The regressed graph through alpha . alpha'; the deletion from Physician is
// regressed after treatsPatient was already replaced, so its own selector
// keeps the bare property.
ShapesGraphPtr star_graph(bool e_in_physician_guard) {
  PathPtr e = cleanup_path();
  PathPtr guard = e_in_physician_guard ? e : treats();
  ShapePtr physician =
      shape::or_(shape::and_(cls("Physician"), shape::exists(guard, shape::not_(node("p2")))),
                 shape::exists(e, shape::and_(cls("ActivePatient"), shape::not_(node("p2")))));
  return graph::normal({{"PatientShape", patient_body()}, {"PhysicianShape", physician}},
                       target::all({target::atom(cls("Patient"), "PatientShape"),
                                    target::atom(shape::exists(e), "PhysicianShape")}));
}

Action b_chain(std::size_t n) {
  std::vector<Step> steps;
  for (std::size_t i = 1; i <= n; ++i)
    steps.push_back(action::add_class("B", shape::exists(path::prop("r" + std::to_string(i)), cls("B"))));
  return action::seq(std::move(steps));
}

ShapesGraphPtr b_graph() { return graph::normal({{"s", cls("B")}}, target::atom(node("c"), "s")); }

}  // namespace

TEST(Regression, SubstituteClass) {
  auto s = graph::normal({{"s", cls("B")}}, target::all({}));
  auto r = substitute(s, "B", shape::or_(cls("B"), node("p2")));
  EXPECT_TRUE(equal(r->constraints[0].body, shape::or_(cls("B"), node("p2"))));
}

TEST(Regression, SubstituteRejectsBareNamePositions) {
  auto closed = graph::normal({{"s", shape::closed({"p"})}}, target::all({}));
  auto alt = path::alt(path::prop("p"), path::prop("q"));
  try {
    substitute(closed, "p", alt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsubstitutablePosition);
  }
  auto eq = graph::normal({{"s", shape::equals(path::prop("q"), "p")}}, target::all({}));
  EXPECT_THROW(substitute(eq, "p", alt), Error);
  // A bare property name is a plain renaming and stays legal.
  EXPECT_NO_THROW(substitute(eq, "p", path::prop("r")));
  // The first argument of a comparison is an ordinary path position.
  EXPECT_NO_THROW(substitute(eq, "q", alt));
}

TEST(Regression, SubstituteInverse) {
  auto s = graph::normal({{"s", shape::exists(path::inverse("p"))}}, target::all({}));
  auto r = substitute(s, "p", path::seq(path::prop("a"), path::prop("b")));
  EXPECT_TRUE(equal(r->constraints[0].body,
                    shape::exists(path::seq(path::inverse("b"), path::inverse("a")))));
}

TEST(Regression, EmptyActionIsIdentity) {
  auto s = hospital_shapes();
  EXPECT_TRUE(equal(regress(s, Action{}).result, s));
  auto lin = regress_linear(s, Action{});
  EXPECT_TRUE(lin.defs.empty());
  EXPECT_TRUE(equal(lin.core, s));
}

TEST(Regression, ExampleFour) {
  auto got = regress(hospital_shapes(), load_action("discharge.json"));
  EXPECT_TRUE(equal(canonicalize(got.result), canonicalize(example_four()))) << to_string(got.result);
  EXPECT_EQ(got.stats.substitutions, 3u);
  EXPECT_FALSE(validates(hospital_graph(), got.result));
}

TEST(Regression, ExampleFourLinear) {
  auto lin = regress_linear(hospital_shapes(), load_action("discharge.json"));
  ASSERT_EQ(lin.defs.size(), 3u);
  EXPECT_EQ(lin.defs[0].base, "ActivePatient");
  EXPECT_EQ(lin.defs[1].base, "DischargePatient");
  EXPECT_EQ(lin.defs[2].base, "Physician");
  EXPECT_TRUE(equal(canonicalize(unfold(lin)), canonicalize(example_four())));
}

TEST(Regression, ActionWithCleanup) {
  auto got = regress(hospital_shapes(), load_action("discharge_cleanup.json"));
  EXPECT_TRUE(equal(canonicalize(got.result), canonicalize(star_graph(false))))
      << to_string(canonicalize(got.result));
  EXPECT_TRUE(validates(hospital_graph(), got.result));
}

TEST(Regression, GuardWithDifferencePathIsEquivalent) {
  auto plain = star_graph(false), with_e = star_graph(true);
  oracle::Vocab v{{"ActivePatient", "Physician"}, {"treatsPatient"}, {"p2"}};
  for (std::size_t k = 1; k <= 3; ++k)
    oracle::for_each_graph(v, k, [&](const DataGraph& g) {
      EXPECT_EQ(validates(g, plain), validates(g, with_e)) << serialize_data_graph(g);
      return false;
    });
  gen::Options o;
  o.classes = {"ActivePatient", "DischargePatient", "Patient", "Physician"};
  o.properties = {"treatsPatient"};
  gen::Rng r(51);
  for (int i = 0; i < 2000; ++i) {
    DataGraph g = gen::graph(r, o, {"p2", "a", "b", "c"}, 35);
    g.add_node(Node("p2"));
    ASSERT_EQ(validates(g, plain), validates(g, with_e)) << serialize_data_graph(g);
  }
}

TEST(Regression, ConditionalRule) {
  auto cond_graph = graph::normal({{"c", cls("A")}}, target::atom(node("a"), "c"));
  Action a = action::seq({action::cond(cond_graph, action::seq({action::add_class("B", node("a"))}))});
  auto s = graph::normal({{"s", cls("B")}}, target::atom(node("a"), "s"));
  auto r = regress(s, a).result;
  ASSERT_EQ(r->kind, GraphKind::And);
  for (const char* facts : {"A(a).\n", "node(a).\n", "B(a).\n", "A(a).\nB(a).\n"}) {
    DataGraph g = parse_data_graph(facts);
    EXPECT_EQ(validates(g, r), validates(apply(g, a), s)) << facts;
  }
}

TEST(Regression, CompositionIsAssociative) {
  gen::Rng r(52);
  gen::Options o;
  o.compare = false;
  o.closed = false;
  for (int i = 0; i < 300; ++i) {
    auto s = gen::normal_graph(r, o, 2);
    Action head = gen::action(r, o, 2, r.pick(2)), tail = gen::action(r, o, 2, 0);
    auto whole = regress(s, action::concat(head, tail)).result;
    auto staged = regress(regress(s, tail).result, head).result;
    EXPECT_TRUE(equal(whole, staged)) << to_string(head) << " ; " << to_string(tail);
  }
}

TEST(Regression, TheoremOneRandomized) {
  gen::Rng r(53);
  gen::Options o;
  std::size_t checked = 0, skipped = 0;
  for (int i = 0; i < 6000 && checked < 1500; ++i) {
    auto s = gen::normal_graph(r, o, 1 + r.pick(3));
    Action a = gen::action(r, o, 1 + r.pick(4), r.pick(2));
    DataGraph g = with_all_nodes(gen::graph(r, o, {"a", "b", "c", "d"}), s, a);
    ShapesGraphPtr t;
    try {
      t = regress(s, a).result;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::UnsubstitutablePosition);
      ++skipped;
      continue;
    }
    bool after = oracle::validates(oracle::apply(g, a), s);
    ASSERT_EQ(after, validates(g, t)) << to_string(s) << "\n" << to_string(a) << "\n"
                                      << serialize_data_graph(g);
    ASSERT_EQ(after, oracle::validates(g, t));
    ++checked;
  }
  EXPECT_GE(checked, 1000u) << skipped << " skipped";
}

TEST(Regression, UnfoldMatchesDirect) {
  gen::Rng r(54);
  gen::Options o;
  o.compare = false;
  o.closed = false;
  for (int i = 0; i < 500; ++i) {
    auto s = gen::normal_graph(r, o, 1 + r.pick(3));
    Action a = gen::action(r, o, 1 + r.pick(4), r.pick(2));
    DataGraph g = with_all_nodes(gen::graph(r, o, {"a", "b", "c"}), s, a);
    auto direct = regress(s, a).result;
    auto lin = regress_linear(s, a);
    ASSERT_EQ(validates(g, direct), validates(g, unfold(lin))) << to_string(a);
  }
}

TEST(Regression, ChainDoublesDirectButNotLinear) {
  for (std::size_t n = 1; n <= 10; ++n) {
    auto direct = regress(b_graph(), b_chain(n));
    EXPECT_EQ(count_occurrences(direct.result, "B"), std::uint64_t{1} << n);
    auto lin = regress_linear(b_graph(), b_chain(n));
    EXPECT_EQ(lin.defs.size(), n);
    for (const auto& d : lin.defs) {
      auto body = graph::normal({{"x", d.class_body}}, target::all({}));
      Vocabulary v = vocabulary_of(d.class_body);
      EXPECT_LE(v.classes.size(), 2u);
      EXPECT_LE(tree_size(body), 16u);
    }
    EXPECT_LE(lin.size(), tree_size(b_graph()) + 16 * n);
    EXPECT_LE(direct.result ? dag_size(direct.result) : 0, 10 * (n + 2));
  }
}

TEST(Regression, ChainOfThreeHasEightOccurrences) {
  auto r = regress(b_graph(), b_chain(3));
  EXPECT_EQ(count_occurrences(r.result, "B"), 8u);
  EXPECT_GT(r.stats.growth, 1.0);
  auto lin = regress_linear(b_graph(), b_chain(3));
  ASSERT_EQ(lin.defs.size(), 3u);
  EXPECT_EQ(lin.defs[0].name, "B__u1");
  for (const auto& d : lin.defs) {
    auto occ = count_occurrences(graph::normal({{"x", d.class_body}}, target::all({})), d.base);
    EXPECT_LE(occ, 2u);
  }
}

TEST(Regression, NonGroundRejected) {
  try {
    regress(hospital_shapes(), load_action("transfer.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonGroundAction);
  }
}
