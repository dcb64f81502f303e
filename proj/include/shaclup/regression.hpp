#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"

namespace shaclup {

// S with every occurrence of class B replaced by `replacement`.
ShapesGraphPtr substitute(const ShapesGraphPtr& s, const std::string& cls,
                          const ShapePtr& replacement);

// S with every occurrence of property p replaced by `replacement`; p^- becomes
// the converse of the replacement. Unless the replacement is a bare property
// name, throws UnsubstitutablePosition when p is the second argument of an
// equality or disjointness shape, or when S contains a closedness shape (its
// implicit range over all other properties would silently change meaning).
ShapesGraphPtr substitute(const ShapesGraphPtr& s, const std::string& prop,
                          const PathPtr& replacement);

struct RegressionStats {
  std::uint64_t substitutions = 0;
  std::uint64_t tree_size_before = 0;
  std::uint64_t tree_size_after = 0;   // saturating
  std::uint64_t dag_size_after = 0;
  double growth = 1.0;                 // tree_size_after / tree_size_before
};

struct RegressedGraph {
  ShapesGraphPtr result;
  RegressionStats stats;
};

// tr_alpha(S). Basic actions are substituted right to left; a conditional
// yields (not S' or tr_{a1.rest}(S)) and (S' or tr_{a2.rest}(S)). Requires a
// ground action (NonGroundAction otherwise).
RegressedGraph regress(const ShapesGraphPtr& s, const Action& a);

// One fresh name per basic action: `name` equals `body`, where `body` is
// base|phi, base&!phi, base|E or base\E over the names current before the
// action.
struct Definition {
  std::string name;
  std::string base;
  BasicKind kind = BasicKind::AddClass;
  ShapePtr class_body;  // class actions
  PathPtr prop_body;    // property actions

  bool on_class() const {
    return kind == BasicKind::AddClass || kind == BasicKind::DelClass;
  }
};

struct LinearEncoding {
  ShapesGraphPtr core;
  std::vector<Definition> defs;  // in action order

  // Tree size of the core plus the tree sizes of the definition bodies.
  std::uint64_t size() const;
};

// Fresh names are B__u<k> / p__u<k>, k counting basic actions in the order
// they are visited (a conditional visits its then-branch first). Raises the
// same errors as the direct regression.
LinearEncoding regress_linear(const ShapesGraphPtr& s, const Action& a);

// Substitutes the definitions back, last one first.
ShapesGraphPtr unfold(const LinearEncoding& enc);

}  // namespace shaclup
