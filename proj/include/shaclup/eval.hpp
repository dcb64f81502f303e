#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"

namespace shaclup {

// Fixed-width bitset over node indices of one interpretation.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static NodeSet full(std::size_t n) {
    NodeSet s(n);
    for (std::size_t i = 0; i < n; ++i) s.insert(i);
    return s;
  }

  std::size_t universe() const { return n_; }
  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool contains(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  NodeSet& operator|=(const NodeSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  NodeSet& operator&=(const NodeSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  NodeSet& subtract(const NodeSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  NodeSet complement() const {
    NodeSet r = full(n_);
    r.subtract(*this);
    return r;
  }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool intersects(const NodeSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool subset_of(const NodeSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Binary relation as successor rows.
struct Relation {
  std::vector<NodeSet> rows;

  explicit Relation(std::size_t n = 0) : rows(n, NodeSet(n)) {}
  std::size_t universe() const { return rows.size(); }
  friend bool operator==(const Relation&, const Relation&) = default;
};

// A data graph with indexed nodes plus shape extensions.
class Interpretation {
 public:
  explicit Interpretation(const DataGraph& g, const std::set<Node>& extra_nodes = {});

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  // Empty set / relation for names not in the graph.
  const NodeSet& class_extension(const std::string& cls) const;
  const Relation& property(const std::string& prop) const;
  const std::map<std::string, Relation>& properties() const { return properties_; }

  void set_shape(const std::string& name, NodeSet extension);
  const NodeSet* shape_extension(const std::string& name) const;

 private:
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, NodeSet> classes_;
  std::map<std::string, Relation> properties_;
  std::map<std::string, NodeSet> shapes_;
  NodeSet empty_set_;
  Relation empty_relation_;
};

// Evaluates shapes and paths over one interpretation, caching per node of the
// expression DAG. Shape names are looked up when first evaluated, so a name
// must be assigned before any expression mentioning it is evaluated.
class Evaluator {
 public:
  explicit Evaluator(const Interpretation& interp) : interp_(interp) {}

  const NodeSet& shape(const ShapePtr& s);
  const Relation& path(const PathPtr& p);

 private:
  const Interpretation& interp_;
  std::unordered_map<const Shape*, std::pair<ShapePtr, NodeSet>> shapes_;
  std::unordered_map<const Path*, std::pair<PathPtr, Relation>> paths_;
};

struct Assignment {
  DataGraph base;
  std::set<std::pair<std::string, Node>> shape_atoms;

  std::set<Node> extension(const std::string& shape_name) const;
};

// Relation / node set of an expression. Nodes mentioned by the expression are
// added to the domain if missing.
std::set<std::pair<Node, Node>> eval_path(const PathPtr& p, const Assignment& a);
std::set<Node> eval_shape(const ShapePtr& s, const Assignment& a);

// I_{G,C}. `order` overrides the dependency order (it must be a valid one).
Assignment canonical_assignment(const DataGraph& g,
                                const std::vector<Constraint>& constraints,
                                const std::vector<std::string>* order = nullptr);

// G with every node constant of S added as an isolated node.
DataGraph with_nodes_of(const DataGraph& g, const ShapesGraphPtr& s);

bool validates(const DataGraph& g, const ShapesGraphPtr& s);

struct TargetViolation {
  std::string target;       // rendering of the failing target expression
  std::vector<Node> nodes;  // selected nodes missing from the shape
};

// Violated target expressions of a Normal graph, in target order; Boolean
// structure is reported by its failing atoms. Empty iff each atom holds.
std::vector<TargetViolation> explain(const DataGraph& g, const ShapesGraphPtr& s);

}  // namespace shaclup
