#include <gtest/gtest.h>

#include "common.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/verifier.hpp"

using namespace shaclup;
using testing_support::hospital_graph;
using testing_support::hospital_shapes;
using testing_support::load_action;

namespace {

VerifierOptions bound(std::size_t k, QueryRoute route = QueryRoute::Auto) {
  VerifierOptions o;
  o.max_domain = k;
  o.route = route;
  return o;
}

// Independent re-check with the reference semantics.
bool breaks(const NotPreserving& v, const ShapesGraphPtr& s) {
  return oracle::validates(v.witness, s) && !oracle::validates(oracle::apply(v.witness, v.instance), s);
}

}  // namespace

TEST(Verifier, GroundingSets) {
  auto gamma = grounding_set(hospital_shapes(), load_action("transfer.json"));
  EXPECT_TRUE(gamma.base_nodes.empty());
  EXPECT_EQ(gamma.fresh_nodes, (std::vector<std::string>{"_g1", "_g2", "_g3"}));
  EXPECT_TRUE(grounding_set(hospital_shapes(), load_action("discharge.json")).fresh_nodes.empty());
  EXPECT_EQ(grounding_set(hospital_shapes(), load_action("discharge.json")).base_nodes,
            (std::vector<std::string>{"p2"}));
  auto one = grounding_set(graph::normal({}, target::all({})),
                           action::seq({action::add_class("B", shape::node("?x"))}));
  EXPECT_EQ(one.all(), (std::vector<std::string>{"_g1"}));
  EXPECT_EQ(grounding_set(hospital_shapes(), load_action("transfer.json"), 1).fresh_nodes.size(), 1u);
}

TEST(Verifier, GroundingOrderAndCap) {
  auto plan = plan_groundings(hospital_shapes(), load_action("transfer.json"), 10'000);
  ASSERT_EQ(plan.groundings.size(), 27u);
  EXPECT_EQ(plan.total, 27u);
  EXPECT_FALSE(plan.heuristic);
  Substitution first{{"?x", "_g1"}, {"?y", "_g1"}, {"?z", "_g1"}};
  Substitution second{{"?x", "_g1"}, {"?y", "_g1"}, {"?z", "_g2"}};
  Substitution last{{"?x", "_g3"}, {"?y", "_g3"}, {"?z", "_g3"}};
  EXPECT_EQ(plan.groundings[0], first);
  EXPECT_EQ(plan.groundings[1], second);
  EXPECT_EQ(plan.groundings[26], last);

  auto capped = plan_groundings(hospital_shapes(), load_action("transfer.json"), 5);
  EXPECT_TRUE(capped.heuristic);
  ASSERT_EQ(capped.groundings.size(), 1u);
  EXPECT_EQ(capped.groundings[0], (Substitution{{"?x", "_g1"}, {"?y", "_g2"}, {"?z", "_g3"}}));
  EXPECT_EQ(plan_groundings(hospital_shapes(), load_action("discharge.json"), 1).groundings.size(), 1u);
  EXPECT_EQ(grounding_count(GroundingSet{{}, {"_g1", "_g2"}}, 70), UINT64_MAX);
}

TEST(Verifier, DischargeIsNotPreserving) {
  auto s = hospital_shapes();
  Action a = load_action("discharge.json");
  Verdict v = is_preserving_bounded(a, s, bound(5));
  ASSERT_TRUE(std::holds_alternative<NotPreserving>(v)) << to_string(v);
  const auto& np = std::get<NotPreserving>(v);
  EXPECT_TRUE(breaks(np, s));
  EXPECT_FALSE(np.heuristic);
  // The running example's graph is itself a witness.
  NotPreserving example{hospital_graph(), a, {}, false};
  EXPECT_TRUE(breaks(example, s));
}

TEST(Verifier, CleanupActionHasSmallCounterexample) {
  auto s = hospital_shapes();
  Verdict v = is_preserving_bounded(load_action("discharge_cleanup.json"), s, bound(3));
  ASSERT_TRUE(std::holds_alternative<NotPreserving>(v)) << to_string(v);
  EXPECT_TRUE(breaks(std::get<NotPreserving>(v), s));
}

TEST(Verifier, EmptyActionPreserves) {
  auto s = hospital_shapes();
  Verdict v = is_preserving_bounded(Action{}, s, bound(3));
  ASSERT_TRUE(std::holds_alternative<NoCounterexampleUpTo>(v));
  EXPECT_EQ(std::get<NoCounterexampleUpTo>(v).domain_bound, 3u);
  EXPECT_EQ(std::get<NoCounterexampleUpTo>(v).groundings_checked, 1u);
}

TEST(Verifier, TransferPreservesUpToThree) {
  Verdict v = is_preserving_bounded(load_action("transfer.json"), hospital_shapes(), bound(3));
  ASSERT_TRUE(std::holds_alternative<NoCounterexampleUpTo>(v)) << to_string(v);
  EXPECT_EQ(std::get<NoCounterexampleUpTo>(v).groundings_checked, 27u);
}

TEST(Verifier, CounterexampleQueryShape) {
  auto q = counterexample_query(hospital_shapes(), load_action("discharge.json"));
  EXPECT_EQ(q->kind, GraphKind::And);
  EXPECT_TRUE(validates(hospital_graph(), q));
  EXPECT_FALSE(validates(apply(hospital_graph(), load_action("discharge_cleanup.json")), q));
}

TEST(Verifier, RoutesAgree) {
  gen::Rng r(81);
  gen::Options o;
  o.nodes = {"a"};
  o.properties = {"p"};
  o.compare = false;
  o.closed = false;
  std::size_t witnesses = 0;
  for (int i = 0; i < 150; ++i) {
    auto s = gen::normal_graph(r, o, 1 + r.pick(2));
    Action a = gen::action(r, o, 1 + r.pick(2), r.pick(2));
    Verdict via_reg = is_preserving_bounded(a, s, bound(2, QueryRoute::Regression));
    Verdict via_dir = is_preserving_bounded(a, s, bound(2, QueryRoute::Direct));
    ASSERT_EQ(via_reg.index(), via_dir.index()) << to_string(s) << "\n" << to_string(a);
    if (auto* np = std::get_if<NotPreserving>(&via_reg)) {
      ++witnesses;
      EXPECT_EQ(np->witness, std::get<NotPreserving>(via_dir).witness);
      EXPECT_TRUE(breaks(*np, s));
    } else {
      EXPECT_EQ(std::get<NoCounterexampleUpTo>(via_dir).direct_queries,
                std::get<NoCounterexampleUpTo>(via_dir).groundings_checked);
    }
  }
  EXPECT_GT(witnesses, 20u);
}

TEST(Verifier, AutoRouteHandlesComparisons) {
  auto s = graph::normal({{"s", shape::equals(path::prop("q"), "p")}}, target::atom(shape::node("a"), "s"));
  Action a = action::seq({action::add_prop("p", path::singleton("a", "b"))});
  EXPECT_THROW(is_preserving_bounded(a, s, bound(2, QueryRoute::Regression)), Error);
  Verdict v = is_preserving_bounded(a, s, bound(2));
  ASSERT_TRUE(std::holds_alternative<NotPreserving>(v));
  EXPECT_TRUE(breaks(std::get<NotPreserving>(v), s));
}

TEST(Verifier, HardnessReductionExamples) {
  auto base = graph::normal({{"s0", shape::cls("B0")}}, target::atom(shape::node("a"), "s0"));
  HardnessInstance h = hardness_reduction(base);
  EXPECT_EQ(h.action.kind, BasicKind::AddClass);
  Vocabulary v = vocabulary_of(base);
  EXPECT_FALSE(v.classes.count(h.cls));
  EXPECT_FALSE(v.nodes.count(h.node));
  Action act = action::seq({h.action});
  EXPECT_TRUE(std::holds_alternative<NotPreserving>(is_preserving_bounded(act, h.shapes, bound(3))));

  auto unsat = graph::normal({{"s0", shape::and_(shape::cls("B0"), shape::not_(shape::cls("B0")))}},
                             target::atom(shape::node("a"), "s0"));
  HardnessInstance hu = hardness_reduction(unsat);
  for (std::size_t k = 1; k <= 3; ++k)
    EXPECT_TRUE(std::holds_alternative<NoCounterexampleUpTo>(
        is_preserving_bounded(action::seq({hu.action}), hu.shapes, bound(k))));

  HardnessInstance hh = hardness_reduction(hospital_shapes());
  EXPECT_TRUE(std::holds_alternative<NotPreserving>(
      is_preserving_bounded(action::seq({hh.action}), hh.shapes, bound(2))));
}

TEST(Verifier, HardnessReductionMatchesSatisfiability) {
  gen::Rng r(82);
  gen::Options o = gen::plain();
  o.star = o.seq = o.alt = false;
  o.compare = o.closed = false;
  o.nodes = {"a"};
  std::size_t sat = 0, unsat = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = gen::normal_graph(r, o, 1 + r.pick(2));
    HardnessInstance h = hardness_reduction(s);
    bool satisfiable = sat_bounded(s, signature_of(s), 3).has_value();
    Verdict v = is_preserving_bounded(action::seq({h.action}), h.shapes, bound(3));
    ASSERT_EQ(satisfiable, std::holds_alternative<NotPreserving>(v)) << to_string(s);
    (satisfiable ? sat : unsat) += 1;
  }
  EXPECT_GT(sat, 10u);
}

TEST(Verifier, VerdictRendering) {
  Verdict v = NoCounterexampleUpTo{3, 27, 0, false};
  EXPECT_NE(to_string(v).find("3"), std::string::npos);
  EXPECT_EQ(to_string(v).find("preserving"), std::string::npos);
}
