#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"

namespace shaclup {

enum class BasicKind { AddClass, DelClass, AddProp, DelProp };

struct BasicAction {
  BasicKind kind = BasicKind::AddClass;
  std::string name;  // class B or property p
  ShapePtr shape;    // AddClass, DelClass
  PathPtr path;      // AddProp, DelProp

  bool on_class() const {
    return kind == BasicKind::AddClass || kind == BasicKind::DelClass;
  }
  bool is_addition() const {
    return kind == BasicKind::AddClass || kind == BasicKind::AddProp;
  }
};

struct Conditional;

// A complex action as a flat sequence; the empty sequence is the empty action.
// Cond(S, a1, a2) . rest is a Conditional step followed by the steps of rest.
struct Action {
  std::vector<std::variant<BasicAction, Conditional>> steps;

  bool empty() const;
};

struct Conditional {
  ShapesGraphPtr condition;
  Action then_branch;
  Action else_branch;
};

using Step = std::variant<BasicAction, Conditional>;

inline bool Action::empty() const { return steps.empty(); }

namespace action {

BasicAction add_class(std::string cls, ShapePtr selector);
BasicAction del_class(std::string cls, ShapePtr selector);
BasicAction add_prop(std::string prop, PathPtr path);
BasicAction del_prop(std::string prop, PathPtr path);

Action seq(std::vector<Step> steps);
Action concat(const Action& a, const Action& b);
Conditional cond(ShapesGraphPtr condition, Action then_branch,
                 Action else_branch = Action{});

}  // namespace action

using Substitution = std::map<std::string, std::string>;  // ?x -> node

std::set<std::string> variables_of(const Action& a);
// Node constants of the action, conditions included.
std::set<std::string> nodes_of(const Action& a);
Vocabulary vocabulary_of(const Action& a);
bool is_ground(const Action& a);

// Throws IncompleteSubstitution naming the unmapped variables.
Action ground(const Action& a, const Substitution& sigma);

// Throws InvalidShapesGraph if a basic action mentions a shape name; conditions
// go through check_shapes_graph.
void check_action(const Action& a);

// up(G, beta): the selection is evaluated on G before any change. Node
// constants of beta are added to G first. Throws NonGroundAction.
DataGraph apply_basic(const DataGraph& g, const BasicAction& b);
// up(G, alpha); conditions are checked on the graph current at that step.
// All node constants of alpha are added to G first.
DataGraph apply(const DataGraph& g, const Action& a);

// G plus isolated nodes _fresh1.._freshk.
DataGraph pad_fresh(const DataGraph& g, std::size_t k);

std::string to_string(const BasicAction& b);
std::string to_string(const Action& a);

bool equal(const Action& a, const Action& b);

}  // namespace shaclup
