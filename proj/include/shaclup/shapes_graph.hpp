#pragma once

#include <map>
#include <string>
#include <vector>

#include "shaclup/ast.hpp"

namespace shaclup {

// Topological order of the shape names of C: every name comes after the names
// its body refers to. Ties are broken by input order. Throws
// RecursiveConstraints (message lists the cycle), InvalidShapesGraph for a name
// defined twice and UnboundShapeName for a reference without a definition.
std::vector<std::string> check_nonrecursive(const std::vector<Constraint>& constraints);

// Full well-formedness check of a (Boolean) shapes graph: each Normal operand
// is non-recursive, every target shape is defined, selectors and shape-property
// operands mention no shape names.
void check_shapes_graph(const ShapesGraphPtr& g);

// Collapses a Boolean combination into one Normal graph. Shape names of the
// k-th Normal operand (left to right, 1-based) get the suffix "_k"; an input
// that is already Normal is returned as is.
ShapesGraphPtr normalize(const ShapesGraphPtr& g);

// Rewrites a Normal graph with a conjunctive target set into one whose
// targets are all (top, s). Throws UnsupportedTargetShape when the targets
// contain a disjunction or negation.
ShapesGraphPtr rewrite_targets_to_top(const ShapesGraphPtr& g);

struct Dialect {
  bool plain_shacl = false;
  bool shaclplus_full = true;
  bool fragment_noNexp = false;   // no *, concatenation, =, disj, closed
  bool fragment_exptime = false;  // additionally n = 1 and singleton pairs

  // Name of the most restrictive fragment: "fragment_exptime",
  // "fragment_noNexp" or "shaclplus_full".
  std::string fragment() const;
};

Dialect dialect_of(const ShapesGraphPtr& g);

// Renames shape names (constraint heads, references and targets).
ShapesGraphPtr rename_shapes(const ShapesGraphPtr& g,
                             const std::map<std::string, std::string>& renaming);

}  // namespace shaclup
