#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shaclup {

// A named node of a data graph. Two nodes are equal iff their names are equal.
class Node {
 public:
  Node() = default;
  explicit Node(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const Node&, const Node&) = default;
  friend bool operator==(const Node&, const Node&) = default;

 private:
  std::string name_;
};

struct ClassAtom {
  std::string cls;
  Node node;

  friend auto operator<=>(const ClassAtom&, const ClassAtom&) = default;
  friend bool operator==(const ClassAtom&, const ClassAtom&) = default;
};

struct PropertyAtom {
  std::string prop;
  Node subject;
  Node object;

  friend auto operator<=>(const PropertyAtom&, const PropertyAtom&) = default;
  friend bool operator==(const PropertyAtom&, const PropertyAtom&) = default;
};

using Atom = std::variant<ClassAtom, PropertyAtom>;

// Facts-file rendering of a single atom, e.g. "treatsPatient(Ann,p1)".
std::string to_string(const Atom& atom);

// True iff `token` matches [A-Za-z_][A-Za-z0-9_:/.#-]*.
bool is_identifier(std::string_view token);

// A finite set of ground atoms plus a set of declared nodes. The node set is
// always a superset of the nodes occurring in atoms; nodes that occur in no
// atom are "isolated". Values are immutable once shared: every transforming
// operation returns a new graph.
class DataGraph {
 public:
  DataGraph() = default;

  // Insertion is idempotent.
  void add(const Atom& atom);
  void add_class(const std::string& cls, const Node& node);
  void add_property(const std::string& prop, const Node& subject,
                    const Node& object);
  // Removing an atom keeps its nodes in the node set.
  void remove(const Atom& atom);
  void add_node(const Node& node);

  bool contains(const Atom& atom) const { return atoms_.count(atom) != 0; }
  bool contains_node(const Node& node) const { return nodes_.count(node) != 0; }

  const std::set<Atom>& atoms() const noexcept { return atoms_; }
  // V(G): nodes of atoms plus isolated nodes.
  const std::set<Node>& nodes() const noexcept { return nodes_; }
  std::set<Node> isolated_nodes() const;

  std::set<std::string> class_names() const;
  std::set<std::string> property_names() const;

  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty() && nodes_.empty(); }

  friend bool operator==(const DataGraph&, const DataGraph&) = default;

 private:
  std::set<Atom> atoms_;
  std::set<Node> nodes_;
};

DataGraph graph_union(const DataGraph& a, const DataGraph& b);
// Atoms of `a` not in `b`; keeps every node of `a`.
DataGraph graph_difference(const DataGraph& a, const DataGraph& b);

// Parses the facts format: `Class(node).`, `prop(node,node).`, `node(name).`,
// `# comment` and blank lines. Throws Error{Syntax} with line and column, or
// Error{NameSortClash} when a token is used with two different sorts.
DataGraph parse_data_graph(std::string_view text);

// Deterministic facts rendering: one line per atom and per isolated node,
// sorted lexicographically.
std::string serialize_data_graph(const DataGraph& graph);

// Imports N-Triples. `<s> rdf:type <B> .` becomes B(s); any other predicate p
// becomes p(s,o). Literals and blank nodes are rejected.
DataGraph parse_ntriples(std::string_view text);

}  // namespace shaclup
