#pragma once

// Reference implementations used only by the tests. They follow the set
// semantics literally (string sets, per-node recursion, fixpoint closure) and
// share no code with the library beyond the AST and DataGraph types.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"

namespace oracle {

using Nodes = std::set<std::string>;
using Rel = std::set<std::pair<std::string, std::string>>;

struct World {
  Nodes domain;
  std::map<std::string, Nodes> classes;
  std::map<std::string, Rel> props;
  std::map<std::string, shaclup::ShapePtr> defs;
};

World world_of(const shaclup::DataGraph& g);
void collect_nodes(const shaclup::ShapePtr& s, Nodes& out);
void collect_nodes(const shaclup::PathPtr& p, Nodes& out);
void collect_nodes(const shaclup::ShapesGraphPtr& g, Nodes& out);
void collect_nodes(const shaclup::Action& a, Nodes& out);

bool holds(const World& w, const shaclup::ShapePtr& s, const std::string& v);
Rel path(const World& w, const shaclup::PathPtr& p);

bool validates(const shaclup::DataGraph& g, const shaclup::ShapesGraphPtr& s);
shaclup::DataGraph apply(const shaclup::DataGraph& g, const shaclup::Action& a);

// Extensions of every shape name of a Normal graph on G (nodes of S added).
std::map<std::string, Nodes> shape_extensions(const shaclup::DataGraph& g,
                                              const shaclup::ShapesGraphPtr& s);

struct Vocab {
  std::vector<std::string> classes, properties, constants;
};

// Every graph over the vocabulary with domain constants + _d1.._d(size-#constants),
// in increasing canonical order (atoms sorted by facts text, first atom most
// significant). Stops early when `visit` returns true.
void for_each_graph(const Vocab& v, std::size_t size,
                    const std::function<bool(const shaclup::DataGraph&)>& visit);

std::vector<std::string> domain_of(const Vocab& v, std::size_t size);

}  // namespace oracle
