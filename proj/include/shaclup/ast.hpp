#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace shaclup {

// Abstract syntax of SHACL+ shapes, paths, targets and (Boolean) shapes
// graphs. All nodes are immutable and shared; transformations memoize on node
// identity so that regressed expressions stay DAGs of linear size even when
// their tree unfolding is exponential.

struct Shape;
struct Path;
struct TargetFormula;
struct ShapesGraph;

using ShapePtr = std::shared_ptr<const Shape>;
using PathPtr = std::shared_ptr<const Path>;
using TargetPtr = std::shared_ptr<const TargetFormula>;
using ShapesGraphPtr = std::shared_ptr<const ShapesGraph>;

// Variables occupy node positions and are spelled with a leading '?'.
inline bool is_variable(const std::string& term) {
  return !term.empty() && term.front() == '?';
}

enum class ShapeKind {
  Top,
  Name,      // shape name s
  Class,     // class name B
  Node,      // node constant {c} (or a variable)
  And,
  Not,
  AtLeast,   // >=n E.phi
  Equals,    // E = p
  Disjoint,  // disj(E, p)
  Closed,    // closed(P)
};

struct Shape {
  ShapeKind kind = ShapeKind::Top;
  std::string name;                // Name, Class, Node; the property of Equals/Disjoint
  std::uint32_t count = 0;         // AtLeast
  ShapePtr lhs;                    // And, Not (operand), AtLeast (filler)
  ShapePtr rhs;                    // And
  PathPtr path;                    // AtLeast, Equals, Disjoint
  std::vector<std::string> props;  // Closed; sorted and unique
};

enum class PathKind { Prop, Inverse, Pair, Seq, Star, Alt, Diff };

struct Path {
  PathKind kind = PathKind::Prop;
  std::string name;  // Prop, Inverse
  PathPtr lhs;       // Seq, Star (operand), Alt, Diff
  PathPtr rhs;       // Seq, Alt, Diff
  ShapePtr first;    // Pair
  ShapePtr second;   // Pair
};

namespace shape {

ShapePtr top();
ShapePtr name(std::string shape_name);
ShapePtr cls(std::string class_name);
ShapePtr node(std::string node_or_variable);
ShapePtr and_(ShapePtr a, ShapePtr b);
ShapePtr not_(ShapePtr a);
// n must be >= 1.
ShapePtr at_least(std::uint32_t n, PathPtr path, ShapePtr filler);
ShapePtr equals(PathPtr path, std::string prop);
ShapePtr disjoint(PathPtr path, std::string prop);
ShapePtr closed(std::vector<std::string> props);

// Derived forms; each expands to the primitive constructors above.
ShapePtr bottom();                                // not top
ShapePtr or_(ShapePtr a, ShapePtr b);             // not(not a and not b)
ShapePtr at_least(std::uint32_t n, PathPtr path);  // >=n E.top
ShapePtr exists(PathPtr path, ShapePtr filler);   // >=1 E.phi
ShapePtr exists(PathPtr path);                    // >=1 E.top
ShapePtr forall(PathPtr path, ShapePtr filler);   // not exists E.not phi
ShapePtr all_of(const std::vector<ShapePtr>& parts);  // top when empty
ShapePtr any_of(const std::vector<ShapePtr>& parts);  // bottom when empty

}  // namespace shape

namespace path {

PathPtr prop(std::string p);
PathPtr inverse(std::string p);
PathPtr pair(ShapePtr first, ShapePtr second);
PathPtr singleton(std::string a, std::string b);  // pair({a},{b})
PathPtr seq(PathPtr a, PathPtr b);
PathPtr star(PathPtr a);
PathPtr alt(PathPtr a, PathPtr b);
PathPtr diff(PathPtr a, PathPtr b);

// Path denoting the converse relation. Pushed down to the leaves, so the result
// only uses the constructors above.
PathPtr invert(const PathPtr& p);

}  // namespace path

struct Constraint {
  std::string name;
  ShapePtr body;
};

enum class TargetKind { Atom, And, Or, Not };

// Boolean combination of target expressions (selector, shape name). The empty
// conjunction is the trivially satisfied target.
struct TargetFormula {
  TargetKind kind = TargetKind::And;
  ShapePtr selector;  // Atom
  std::string shape;  // Atom
  std::vector<TargetPtr> args;
};

namespace target {

TargetPtr atom(ShapePtr selector, std::string shape_name);
TargetPtr all(std::vector<TargetPtr> args);
TargetPtr any(std::vector<TargetPtr> args);
TargetPtr not_(TargetPtr arg);

}  // namespace target

enum class GraphKind { Normal, And, Or, Not };

struct ShapesGraph {
  GraphKind kind = GraphKind::Normal;
  std::vector<Constraint> constraints;  // Normal
  TargetPtr targets;                    // Normal
  std::vector<ShapesGraphPtr> args;     // And, Or (two or more), Not (one)
};

namespace graph {

ShapesGraphPtr normal(std::vector<Constraint> constraints, TargetPtr targets);
ShapesGraphPtr and_(ShapesGraphPtr a, ShapesGraphPtr b);
ShapesGraphPtr or_(ShapesGraphPtr a, ShapesGraphPtr b);
ShapesGraphPtr not_(ShapesGraphPtr a);

}  // namespace graph

// Structural equality (node identity is a shortcut, never required).
bool equal(const ShapePtr& a, const ShapePtr& b);
bool equal(const PathPtr& a, const PathPtr& b);
bool equal(const TargetPtr& a, const TargetPtr& b);
bool equal(const ShapesGraphPtr& a, const ShapesGraphPtr& b);

// Human-readable rendering. Derived forms are recognized and printed back in
// their short form (|, forall, exists).
std::string to_string(const ShapePtr& s);
std::string to_string(const PathPtr& p);
std::string to_string(const TargetPtr& t);
std::string to_string(const ShapesGraphPtr& g);

// Vocabulary occurring in an expression.
struct Vocabulary {
  std::set<std::string> classes;
  std::set<std::string> properties;
  std::set<std::string> nodes;
  std::set<std::string> variables;
  std::set<std::string> shape_names;
  bool has_closed = false;

  void merge(const Vocabulary& other);
};

Vocabulary vocabulary_of(const ShapePtr& s);
Vocabulary vocabulary_of(const PathPtr& p);
Vocabulary vocabulary_of(const TargetPtr& t);
Vocabulary vocabulary_of(const ShapesGraphPtr& g);

// Number of nodes of the tree unfolding (shared subterms counted once per
// occurrence). Saturates at UINT64_MAX.
std::uint64_t tree_size(const ShapePtr& s);
std::uint64_t tree_size(const PathPtr& p);
std::uint64_t tree_size(const ShapesGraphPtr& g);
// Number of distinct nodes of the DAG.
std::uint64_t dag_size(const ShapesGraphPtr& g);

// Occurrences of a class or property name in the tree unfolding.
std::uint64_t count_occurrences(const ShapesGraphPtr& g, const std::string& name);

// Removes double negations everywhere. Two shapes graphs that differ only in
// how derived forms were written are equal after canonicalization.
ShapePtr canonicalize(const ShapePtr& s);
PathPtr canonicalize(const PathPtr& p);
ShapesGraphPtr canonicalize(const ShapesGraphPtr& g);

}  // namespace shaclup
