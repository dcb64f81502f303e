#pragma once

#include <unordered_map>

#include "shaclup/ast.hpp"

namespace shaclup {

// Bottom-up rebuilder for shapes, paths, targets and shapes graphs. Results
// are memoized on node identity, and a node whose children are unchanged is
// returned as is, so sharing in the input carries over to the output.
// Subclasses override the leaf hooks.
class Rewriter {
 public:
  virtual ~Rewriter() = default;

  ShapePtr shape(const ShapePtr& s);
  PathPtr path(const PathPtr& p);
  TargetPtr target(const TargetPtr& t);
  ShapesGraphPtr graph(const ShapesGraphPtr& g);

 protected:
  // Top, Name, Class, Node and Closed shapes.
  virtual ShapePtr shape_leaf(const ShapePtr& s) { return s; }
  // Prop and Inverse paths.
  virtual PathPtr path_leaf(const PathPtr& p) { return p; }
  // Equals/Disjoint, after the path operand was rewritten into `new_path`.
  virtual ShapePtr comparison(const ShapePtr& original, const PathPtr& new_path);
  // Shape names in constraint heads and target atoms.
  virtual std::string shape_name(const std::string& name) { return name; }

 private:
  std::unordered_map<const Shape*, ShapePtr> shapes_;
  std::unordered_map<const Path*, PathPtr> paths_;
};

}  // namespace shaclup
