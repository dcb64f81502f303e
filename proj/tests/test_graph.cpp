#include <gtest/gtest.h>

#include "common.hpp"
#include "gen.hpp"
#include "shaclup/error.hpp"
#include "shaclup/graph.hpp"

using namespace shaclup;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_data_graph(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorKind::Io;
}

}  // namespace

TEST(DataGraph, ParsesHospitalFacts) {
  DataGraph g = testing_support::hospital_graph();
  EXPECT_EQ(g.size(), 10u);
  EXPECT_EQ(g.nodes().size(), 5u);
  EXPECT_TRUE(g.contains(ClassAtom{"Physician", Node("Tom")}));
  EXPECT_TRUE(g.contains(PropertyAtom{"treatsPatient", Node("Tom"), Node("p2")}));
  EXPECT_TRUE(g.isolated_nodes().empty());
}

TEST(DataGraph, IsolatedNodesAndComments) {
  DataGraph g = parse_data_graph("# header\n\nnode(x).\n  A( y ) .\n");
  EXPECT_EQ(g.nodes().size(), 2u);
  ASSERT_EQ(g.isolated_nodes().size(), 1u);
  EXPECT_EQ(g.isolated_nodes().begin()->name(), "x");
}

TEST(DataGraph, InsertionIsIdempotentAndRemovalKeepsNodes) {
  DataGraph g;
  g.add_property("p", Node("a"), Node("b"));
  g.add_property("p", Node("a"), Node("b"));
  EXPECT_EQ(g.size(), 1u);
  g.remove(PropertyAtom{"p", Node("a"), Node("b")});
  EXPECT_EQ(g.size(), 0u);
  EXPECT_EQ(g.nodes().size(), 2u);
}

TEST(DataGraph, SerializationIsSortedAndRoundTrips) {
  DataGraph g = parse_data_graph("q(b,a).\nA(a).\nnode(z).\n");
  EXPECT_EQ(serialize_data_graph(g), "A(a).\nnode(z).\nq(b,a).\n");
  gen::Rng r(7);
  for (int i = 0; i < 200; ++i) {
    DataGraph h = gen::graph(r, gen::Options{}, {"a", "b", "c", "d"});
    EXPECT_EQ(parse_data_graph(serialize_data_graph(h)), h);
  }
}

TEST(DataGraph, SyntaxErrorsCarryPosition) {
  try {
    parse_data_graph("A(a).\np(a b).\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
  EXPECT_EQ(kind_of("A(a)"), ErrorKind::Syntax);
  EXPECT_EQ(kind_of("A(a,b,c)."), ErrorKind::Syntax);
  EXPECT_EQ(kind_of("1A(a)."), ErrorKind::Syntax);
}

TEST(DataGraph, NameUsedWithTwoSorts) {
  EXPECT_EQ(kind_of("A(a).\np(A,b).\n"), ErrorKind::NameSortClash);
  EXPECT_EQ(kind_of("A(a).\nA(b,c).\n"), ErrorKind::NameSortClash);
}

TEST(DataGraph, UnionAndDifference) {
  DataGraph a = parse_data_graph("A(x).\np(x,y).\n");
  DataGraph b = parse_data_graph("A(x).\nB(z).\n");
  DataGraph u = graph_union(a, b);
  EXPECT_EQ(u.size(), 3u);
  DataGraph d = graph_difference(a, b);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_TRUE(d.contains_node(Node("x")));
}

TEST(DataGraph, NTriplesImport) {
  DataGraph g = parse_ntriples(
      "<p1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <Patient> .\n"
      "<Ann> <treatsPatient> <p1> .\n");
  EXPECT_TRUE(g.contains(ClassAtom{"Patient", Node("p1")}));
  EXPECT_TRUE(g.contains(PropertyAtom{"treatsPatient", Node("Ann"), Node("p1")}));
  EXPECT_THROW(parse_ntriples("<a> <p> \"lit\" .\n"), Error);
  EXPECT_THROW(parse_ntriples("_:b <p> <a> .\n"), Error);
}

TEST(DataGraph, IdentifierGrammar) {
  EXPECT_TRUE(is_identifier("ex:a/b.c#d-e"));
  EXPECT_TRUE(is_identifier("_x"));
  EXPECT_FALSE(is_identifier("9x"));
  EXPECT_FALSE(is_identifier(""));
}
