#include <gtest/gtest.h>

#include "common.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "shaclup/actions.hpp"
#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"

using namespace shaclup;
using testing_support::hospital_graph;
using testing_support::hospital_shapes;
using testing_support::load_action;

namespace {

DataGraph discharged_graph() {
  DataGraph g = hospital_graph();
  g.add_class("DischargePatient", Node("p2"));
  g.remove(ClassAtom{"ActivePatient", Node("p2")});
  g.remove(ClassAtom{"Physician", Node("Tom")});
  return g;
}

}  // namespace

TEST(Actions, ExampleTwoUpdate) {
  DataGraph got = apply(hospital_graph(), load_action("discharge.json"));
  EXPECT_EQ(got, discharged_graph()) << serialize_data_graph(got);
  EXPECT_FALSE(validates(got, hospital_shapes()));
}

TEST(Actions, ExampleThreeCleanupRestoresValidity) {
  DataGraph got = apply(hospital_graph(), load_action("discharge_cleanup.json"));
  DataGraph want = discharged_graph();
  want.remove(PropertyAtom{"treatsPatient", Node("Tom"), Node("p2")});
  EXPECT_EQ(got, want) << serialize_data_graph(got);
  EXPECT_TRUE(validates(got, hospital_shapes()));
}

TEST(Actions, VariablesAndGrounding) {
  Action transfer = load_action("transfer.json");
  EXPECT_EQ(variables_of(transfer), (std::set<std::string>{"?x", "?y", "?z"}));
  EXPECT_TRUE(variables_of(load_action("discharge.json")).empty());
  EXPECT_TRUE(variables_of(Action{}).empty());
  EXPECT_FALSE(is_ground(transfer));

  Action g = ground(transfer, {{"?x", "Tom"}, {"?y", "p2"}, {"?z", "p1"}});
  EXPECT_TRUE(is_ground(g));
  EXPECT_EQ(nodes_of(g), (std::set<std::string>{"Tom", "p1", "p2"}));
  DataGraph after = apply(hospital_graph(), g);
  EXPECT_FALSE(after.contains(PropertyAtom{"treatsPatient", Node("Tom"), Node("p2")}));
  EXPECT_TRUE(after.contains(PropertyAtom{"treatsPatient", Node("Tom"), Node("p1")}));

  try {
    ground(transfer, {{"?x", "Tom"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompleteSubstitution);
    EXPECT_NE(std::string(e.what()).find("?y"), std::string::npos);
  }
  Action d = load_action("discharge.json");
  EXPECT_TRUE(equal(ground(d, {{"?x", "c"}}), d));
  EXPECT_TRUE(equal(ground(action::seq({action::add_class("B", shape::node("?x"))}), {{"?x", "c"}}),
                    action::seq({action::add_class("B", shape::node("c"))})));
}

TEST(Actions, NonGroundIsRejected) {
  Action a = action::seq({action::add_class("B", shape::node("?x"))});
  try {
    apply(DataGraph{}, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonGroundAction);
  }
}

TEST(Actions, BasicSemantics) {
  DataGraph g = parse_data_graph("q(a,b).\n");
  DataGraph copied = apply_basic(g, action::add_prop("p", path::prop("q")));
  EXPECT_EQ(copied, parse_data_graph("q(a,b).\np(a,b).\n"));
  EXPECT_EQ(apply_basic(hospital_graph(),
                        action::add_class("B", shape::and_(shape::cls("Bx"), shape::not_(shape::cls("Bx"))))),
            hospital_graph());
  EXPECT_EQ(apply(g, Action{}), g);
  // The selection is read before the change.
  DataGraph chain = parse_data_graph("p(a,b).\np(b,c).\n");
  DataGraph closed = apply_basic(chain, action::add_prop("p", path::seq(path::prop("p"), path::prop("p"))));
  EXPECT_EQ(closed.size(), 3u);
}

TEST(Actions, ConditionSeesCurrentGraph) {
  auto cond_graph = graph::normal({{"s", shape::cls("A")}}, target::atom(shape::node("a"), "s"));
  Action a = action::seq({action::add_class("A", shape::node("a")),
                          action::cond(cond_graph, action::seq({action::add_class("B", shape::node("a"))}),
                                       action::seq({action::add_class("C", shape::node("a"))}))});
  DataGraph got = apply(DataGraph{}, a);
  EXPECT_TRUE(got.contains(ClassAtom{"B", Node("a")}));
  EXPECT_FALSE(got.contains(ClassAtom{"C", Node("a")}));
}

TEST(Actions, ShapeNameInBasicActionRejected) {
  Action a = action::seq({action::add_class("B", shape::name("s"))});
  EXPECT_THROW(check_action(a), Error);
}

TEST(Actions, PadFresh) {
  DataGraph g = pad_fresh(DataGraph{}, 2);
  EXPECT_TRUE(g.contains_node(Node("_fresh1")));
  EXPECT_TRUE(g.contains_node(Node("_fresh2")));
  EXPECT_EQ(g.nodes().size(), 2u);
}

TEST(Actions, ApplyAgreesWithOracle) {
  gen::Rng r(41);
  for (int i = 0; i < 1000; ++i) {
    Action a = gen::action(r, gen::Options{}, 1 + r.pick(4), r.pick(2));
    DataGraph g = gen::graph(r, gen::Options{}, {"a", "b", "c", "d"});
    ASSERT_EQ(apply(g, a), oracle::apply(g, a)) << to_string(a) << "\n" << serialize_data_graph(g);
  }
}

TEST(Actions, NeverInventsNodes) {
  gen::Rng r(42);
  for (int i = 0; i < 500; ++i) {
    Action a = gen::action(r, gen::Options{}, 3, 1);
    DataGraph g = gen::graph(r, gen::Options{}, {"a", "b", "c", "d"});
    std::set<std::string> allowed = nodes_of(a);
    for (const auto& n : g.nodes()) allowed.insert(n.name());
    for (const auto& n : apply(g, a).nodes()) EXPECT_TRUE(allowed.count(n.name())) << n.name();
  }
}

TEST(Actions, RepeatedAdditionIsIdempotent) {
  gen::Rng r(43);
  gen::Options sel;
  sel.classes = {"A"};
  sel.compare = false;
  sel.closed = false;
  for (int i = 0; i < 300; ++i) {
    Action once = action::seq({action::add_class("B", gen::shape(r, sel, 2))});
    DataGraph g = gen::graph(r, sel, {"a", "b", "c"});
    DataGraph one = apply(g, once);
    EXPECT_EQ(apply(one, once), one);
  }
}

TEST(Actions, DeleteThenAddRestoresEdge) {
  gen::Rng r(44);
  for (int i = 0; i < 200; ++i) {
    DataGraph g = gen::graph(r, gen::Options{}, {"a", "b", "c"});
    if (g.nodes().size() < 2) continue;
    std::string x = g.nodes().begin()->name(), y = g.nodes().rbegin()->name();
    Action a = action::seq({action::del_prop("p", path::singleton(x, y)),
                            action::add_prop("p", path::singleton(x, y))});
    DataGraph after = apply(g, a);
    DataGraph want = g;
    want.add_property("p", Node(x), Node(y));
    EXPECT_EQ(after, want);
  }
}
