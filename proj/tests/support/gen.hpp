#pragma once

// Hand-rolled random generators for property tests. Everything is drawn from a
// seeded std::mt19937_64 so a failing case is reproduced by its seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"

namespace gen {

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  bool chance(unsigned percent) { return pick(100) < percent; }
  template <typename T>
  const T& one_of(const std::vector<T>& xs) { return xs[pick(xs.size())]; }

  std::mt19937_64 engine;
};

struct Options {
  std::vector<std::string> classes{"A", "B"};
  std::vector<std::string> properties{"p", "q"};
  std::vector<std::string> nodes{"a", "b"};
  int depth = 2;
  bool star = true;
  bool seq = true;
  bool alt = true;
  bool diff = true;
  bool pair = true;
  bool inverse = true;
  bool compare = true;  // E = p, disj(E, p)
  bool closed = true;
  std::uint32_t max_count = 2;
  bool general_targets = true;  // any shape as selector, Boolean target formulas
};

// Plain SHACL: no path difference or shape pairs, targets are node, class or
// (inverse) property selectors in a conjunction.
Options plain();

shaclup::ShapePtr shape(Rng& r, const Options& o, int depth,
                        const std::vector<std::string>& names = {});
shaclup::PathPtr path(Rng& r, const Options& o, int depth);

// Normal graph with constraints s1..sn (si may refer to sj for j < i).
shaclup::ShapesGraphPtr normal_graph(Rng& r, const Options& o, std::size_t constraints);
// Boolean combination of up to `operands` Normal graphs.
shaclup::ShapesGraphPtr boolean_graph(Rng& r, const Options& o, std::size_t operands,
                                      std::size_t constraints);

// Graph over o's vocabulary with at most max_nodes nodes drawn from `node_pool`.
shaclup::DataGraph graph(Rng& r, const Options& o, const std::vector<std::string>& node_pool,
                         unsigned density_percent = 30);

shaclup::BasicAction basic_action(Rng& r, const Options& o);
// `basics` basic actions plus at most `conditionals` conditionals (each with a
// one-step branch), in random order.
shaclup::Action action(Rng& r, const Options& o, std::size_t basics, std::size_t conditionals);

}  // namespace gen
