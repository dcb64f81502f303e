#include <gtest/gtest.h>

#include "gen.hpp"
#include "oracle.hpp"
#include "shaclup/bounded.hpp"
#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"

using namespace shaclup;

namespace {

ShapesGraphPtr at_c(ShapePtr body) {
  return graph::normal({{"s", std::move(body)}}, target::atom(shape::node("c"), "s"));
}

BoundedOptions engine(BoundedEngine e) {
  BoundedOptions o;
  o.engine = e;
  return o;
}

oracle::Vocab vocab(const Signature& sig) { return {sig.classes, sig.properties, sig.constants}; }

std::optional<DataGraph> oracle_first(const Signature& sig, std::size_t k,
                                      const std::function<bool(const DataGraph&)>& wanted) {
  std::optional<DataGraph> found;
  std::size_t lo = std::max<std::size_t>(1, sig.constants.size());
  std::size_t hi = std::max(k, sig.constants.size());
  for (std::size_t n = lo; n <= hi && !found; ++n)
    oracle::for_each_graph(vocab(sig), n, [&](const DataGraph& g) {
      if (!wanted(g)) return false;
      found = g;
      return true;
    });
  return found;
}

std::size_t universe_size(const Signature& sig, std::size_t k) {
  std::size_t n = std::max(k, sig.constants.size());
  return sig.classes.size() * n + sig.properties.size() * n * n;
}

}  // namespace

TEST(Bounded, DomainAndUniverse) {
  Signature sig{{"B"}, {"p"}, {"c"}};
  EXPECT_EQ(bounded_domain(sig, 3), (std::vector<std::string>{"c", "_d1", "_d2"}));
  auto u = atom_universe(sig, bounded_domain(sig, 2));
  ASSERT_EQ(u.size(), 6u);
  EXPECT_EQ(to_string(u.front()), "B(_d1)");
  EXPECT_EQ(to_string(u.back()), "p(c,c)");
}

TEST(Bounded, Contradiction) {
  auto s = at_c(shape::and_(shape::cls("B"), shape::not_(shape::cls("B"))));
  for (auto e : {BoundedEngine::Sat, BoundedEngine::Enumerate})
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_FALSE(sat_bounded(s, signature_of(s), k, engine(e)));
}

TEST(Bounded, ForcedMinimalModel) {
  auto s = at_c(shape::exists(path::prop("p")));
  for (auto e : {BoundedEngine::Sat, BoundedEngine::Enumerate}) {
    auto g = sat_bounded(s, signature_of(s), 1, engine(e));
    ASSERT_TRUE(g);
    EXPECT_EQ(*g, parse_data_graph("p(c,c).\n"));
  }
}

TEST(Bounded, TwoSuccessorsGolden) {
  auto s = at_c(shape::at_least(2, path::prop("p")));
  for (auto e : {BoundedEngine::Sat, BoundedEngine::Enumerate}) {
    EXPECT_FALSE(sat_bounded(s, signature_of(s), 1, engine(e)));
    for (std::size_t k : {2u, 3u}) {
      BoundedStats stats;
      auto g = sat_bounded(s, signature_of(s), k, engine(e), &stats);
      ASSERT_TRUE(g);
      EXPECT_EQ(*g, parse_data_graph("p(c,c).\np(c,_d1).\n")) << serialize_data_graph(*g);
      EXPECT_EQ(stats.domain_size, 2u);
    }
  }
}

TEST(Bounded, BudgetExceeded) {
  auto s = at_c(shape::at_least(3, path::prop("p")));
  BoundedOptions o = engine(BoundedEngine::Enumerate);
  o.budget = 5;
  try {
    sat_bounded(s, signature_of(s), 3, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

TEST(Bounded, EnginesMatchOracleFirstModel) {
  gen::Rng r(71);
  gen::Options o;
  o.nodes = {"a"};
  o.properties = {"p"};
  std::size_t found = 0, none = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = gen::boolean_graph(r, o, 2, 2);
    Signature sig = signature_of(s);
    std::size_t k = 2;
    if (universe_size(sig, k) > 20) continue;
    auto want = oracle_first(sig, k, [&](const DataGraph& g) { return oracle::validates(g, s); });
    auto via_sat = sat_bounded(s, sig, k, engine(BoundedEngine::Sat));
    auto via_enum = sat_bounded(s, sig, k, engine(BoundedEngine::Enumerate));
    ASSERT_EQ(want.has_value(), via_sat.has_value()) << to_string(s);
    ASSERT_EQ(want.has_value(), via_enum.has_value()) << to_string(s);
    if (want) {
      ++found;
      EXPECT_EQ(*want, *via_sat) << to_string(s);
      EXPECT_EQ(*want, *via_enum) << to_string(s);
    } else {
      ++none;
    }
  }
  EXPECT_GT(found, 50u);
  EXPECT_GT(none, 5u);
}

TEST(Bounded, UpdateSearchMatchesBruteForce) {
  gen::Rng r(72);
  gen::Options o;
  o.nodes = {"a"};
  o.properties = {"p"};
  o.classes = {"A"};
  std::size_t found = 0;
  int tried = 0;
  for (int i = 0; i < 400; ++i) {
    auto s = gen::normal_graph(r, o, 1 + r.pick(2));
    Action a = gen::action(r, o, 1 + r.pick(2), r.pick(2));
    Signature sig = signature_of(s, a);
    std::size_t k = 2;
    if (universe_size(sig, k) > 18) continue;
    ++tried;
    auto want = oracle_first(sig, k, [&](const DataGraph& g) {
      return oracle::validates(g, s) && !oracle::validates(oracle::apply(g, a), s);
    });
    for (auto e : {BoundedEngine::Sat, BoundedEngine::Enumerate}) {
      auto got = sat_bounded_update(s, a, sig, k, engine(e));
      ASSERT_EQ(want.has_value(), got.has_value()) << to_string(s) << "\n" << to_string(a);
      if (want) EXPECT_EQ(*want, *got) << to_string(s) << "\n" << to_string(a);
    }
    if (want) ++found;
  }
  EXPECT_GT(tried, 150);
  EXPECT_GT(found, 20u);
}
