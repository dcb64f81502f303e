#include "shaclup/ast.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "shaclup/error.hpp"

namespace shaclup {

namespace shape {

namespace {
ShapePtr make(Shape s) { return std::make_shared<const Shape>(std::move(s)); }
}  // namespace

ShapePtr top() {
  static const ShapePtr kTop = make(Shape{});
  return kTop;
}

ShapePtr name(std::string shape_name) {
  Shape s;
  s.kind = ShapeKind::Name;
  s.name = std::move(shape_name);
  return make(std::move(s));
}

ShapePtr cls(std::string class_name) {
  Shape s;
  s.kind = ShapeKind::Class;
  s.name = std::move(class_name);
  return make(std::move(s));
}

ShapePtr node(std::string node_or_variable) {
  Shape s;
  s.kind = ShapeKind::Node;
  s.name = std::move(node_or_variable);
  return make(std::move(s));
}

ShapePtr and_(ShapePtr a, ShapePtr b) {
  Shape s;
  s.kind = ShapeKind::And;
  s.lhs = std::move(a);
  s.rhs = std::move(b);
  return make(std::move(s));
}

ShapePtr not_(ShapePtr a) {
  Shape s;
  s.kind = ShapeKind::Not;
  s.lhs = std::move(a);
  return make(std::move(s));
}

ShapePtr at_least(std::uint32_t n, PathPtr path, ShapePtr filler) {
  if (n == 0)
    throw Error(ErrorKind::InvalidShapesGraph,
                "cardinality restriction requires n >= 1");
  Shape s;
  s.kind = ShapeKind::AtLeast;
  s.count = n;
  s.path = std::move(path);
  s.lhs = std::move(filler);
  return make(std::move(s));
}

ShapePtr equals(PathPtr path, std::string prop) {
  Shape s;
  s.kind = ShapeKind::Equals;
  s.path = std::move(path);
  s.name = std::move(prop);
  return make(std::move(s));
}

ShapePtr disjoint(PathPtr path, std::string prop) {
  Shape s;
  s.kind = ShapeKind::Disjoint;
  s.path = std::move(path);
  s.name = std::move(prop);
  return make(std::move(s));
}

ShapePtr closed(std::vector<std::string> props) {
  std::sort(props.begin(), props.end());
  props.erase(std::unique(props.begin(), props.end()), props.end());
  Shape s;
  s.kind = ShapeKind::Closed;
  s.props = std::move(props);
  return make(std::move(s));
}

ShapePtr bottom() { return not_(top()); }

ShapePtr or_(ShapePtr a, ShapePtr b) {
  return not_(and_(not_(std::move(a)), not_(std::move(b))));
}

ShapePtr at_least(std::uint32_t n, PathPtr path) {
  return at_least(n, std::move(path), top());
}

ShapePtr exists(PathPtr path, ShapePtr filler) {
  return at_least(1, std::move(path), std::move(filler));
}

ShapePtr exists(PathPtr path) { return at_least(1, std::move(path), top()); }

ShapePtr forall(PathPtr path, ShapePtr filler) {
  return not_(exists(std::move(path), not_(std::move(filler))));
}

ShapePtr all_of(const std::vector<ShapePtr>& parts) {
  if (parts.empty()) return top();
  ShapePtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = and_(acc, parts[i]);
  return acc;
}

ShapePtr any_of(const std::vector<ShapePtr>& parts) {
  if (parts.empty()) return bottom();
  ShapePtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = or_(acc, parts[i]);
  return acc;
}

}  // namespace shape

namespace path {

namespace {
PathPtr make(Path p) { return std::make_shared<const Path>(std::move(p)); }
}  // namespace

PathPtr prop(std::string p) {
  Path e;
  e.kind = PathKind::Prop;
  e.name = std::move(p);
  return make(std::move(e));
}

PathPtr inverse(std::string p) {
  Path e;
  e.kind = PathKind::Inverse;
  e.name = std::move(p);
  return make(std::move(e));
}

PathPtr pair(ShapePtr first, ShapePtr second) {
  Path e;
  e.kind = PathKind::Pair;
  e.first = std::move(first);
  e.second = std::move(second);
  return make(std::move(e));
}

PathPtr singleton(std::string a, std::string b) {
  return pair(shape::node(std::move(a)), shape::node(std::move(b)));
}

PathPtr seq(PathPtr a, PathPtr b) {
  Path e;
  e.kind = PathKind::Seq;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}

PathPtr star(PathPtr a) {
  Path e;
  e.kind = PathKind::Star;
  e.lhs = std::move(a);
  return make(std::move(e));
}

PathPtr alt(PathPtr a, PathPtr b) {
  Path e;
  e.kind = PathKind::Alt;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}

PathPtr diff(PathPtr a, PathPtr b) {
  Path e;
  e.kind = PathKind::Diff;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}

namespace {

PathPtr invert_memo(const PathPtr& p,
                    std::unordered_map<const Path*, PathPtr>& memo) {
  if (auto it = memo.find(p.get()); it != memo.end()) return it->second;
  PathPtr out;
  switch (p->kind) {
    case PathKind::Prop: out = inverse(p->name); break;
    case PathKind::Inverse: out = prop(p->name); break;
    case PathKind::Pair: out = pair(p->second, p->first); break;
    case PathKind::Seq:
      out = seq(invert_memo(p->rhs, memo), invert_memo(p->lhs, memo));
      break;
    case PathKind::Star: out = star(invert_memo(p->lhs, memo)); break;
    case PathKind::Alt:
      out = alt(invert_memo(p->lhs, memo), invert_memo(p->rhs, memo));
      break;
    case PathKind::Diff:
      out = diff(invert_memo(p->lhs, memo), invert_memo(p->rhs, memo));
      break;
  }
  memo.emplace(p.get(), out);
  return out;
}

}  // namespace

PathPtr invert(const PathPtr& p) {
  std::unordered_map<const Path*, PathPtr> memo;
  return invert_memo(p, memo);
}

}  // namespace path

namespace target {

TargetPtr atom(ShapePtr selector, std::string shape_name) {
  TargetFormula t;
  t.kind = TargetKind::Atom;
  t.selector = std::move(selector);
  t.shape = std::move(shape_name);
  return std::make_shared<const TargetFormula>(std::move(t));
}

TargetPtr all(std::vector<TargetPtr> args) {
  TargetFormula t;
  t.kind = TargetKind::And;
  t.args = std::move(args);
  return std::make_shared<const TargetFormula>(std::move(t));
}

TargetPtr any(std::vector<TargetPtr> args) {
  TargetFormula t;
  t.kind = TargetKind::Or;
  t.args = std::move(args);
  return std::make_shared<const TargetFormula>(std::move(t));
}

TargetPtr not_(TargetPtr arg) {
  TargetFormula t;
  t.kind = TargetKind::Not;
  t.args.push_back(std::move(arg));
  return std::make_shared<const TargetFormula>(std::move(t));
}

}  // namespace target

namespace graph {

ShapesGraphPtr normal(std::vector<Constraint> constraints, TargetPtr targets) {
  ShapesGraph g;
  g.kind = GraphKind::Normal;
  g.constraints = std::move(constraints);
  g.targets = targets ? std::move(targets) : target::all({});
  return std::make_shared<const ShapesGraph>(std::move(g));
}

ShapesGraphPtr and_(ShapesGraphPtr a, ShapesGraphPtr b) {
  ShapesGraph g;
  g.kind = GraphKind::And;
  g.args = {std::move(a), std::move(b)};
  return std::make_shared<const ShapesGraph>(std::move(g));
}

ShapesGraphPtr or_(ShapesGraphPtr a, ShapesGraphPtr b) {
  ShapesGraph g;
  g.kind = GraphKind::Or;
  g.args = {std::move(a), std::move(b)};
  return std::make_shared<const ShapesGraph>(std::move(g));
}

ShapesGraphPtr not_(ShapesGraphPtr a) {
  ShapesGraph g;
  g.kind = GraphKind::Not;
  g.args = {std::move(a)};
  return std::make_shared<const ShapesGraph>(std::move(g));
}

}  // namespace graph

// ---------------------------------------------------------------------------
// Equality

bool equal(const ShapePtr& a, const ShapePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ShapeKind::Top: return true;
    case ShapeKind::Name:
    case ShapeKind::Class:
    case ShapeKind::Node: return a->name == b->name;
    case ShapeKind::And: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case ShapeKind::Not: return equal(a->lhs, b->lhs);
    case ShapeKind::AtLeast:
      return a->count == b->count && equal(a->path, b->path) &&
             equal(a->lhs, b->lhs);
    case ShapeKind::Equals:
    case ShapeKind::Disjoint:
      return a->name == b->name && equal(a->path, b->path);
    case ShapeKind::Closed: return a->props == b->props;
  }
  return false;
}

bool equal(const PathPtr& a, const PathPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case PathKind::Prop:
    case PathKind::Inverse: return a->name == b->name;
    case PathKind::Pair:
      return equal(a->first, b->first) && equal(a->second, b->second);
    case PathKind::Star: return equal(a->lhs, b->lhs);
    case PathKind::Seq:
    case PathKind::Alt:
    case PathKind::Diff:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const TargetPtr& a, const TargetPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == TargetKind::Atom)
    return a->shape == b->shape && equal(a->selector, b->selector);
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool equal(const ShapesGraphPtr& a, const ShapesGraphPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == GraphKind::Normal) {
    if (a->constraints.size() != b->constraints.size()) return false;
    for (std::size_t i = 0; i < a->constraints.size(); ++i) {
      if (a->constraints[i].name != b->constraints[i].name ||
          !equal(a->constraints[i].body, b->constraints[i].body))
        return false;
    }
    return equal(a->targets, b->targets);
  }
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(std::ostream& os, const ShapePtr& s);

void print(std::ostream& os, const PathPtr& p) {
  switch (p->kind) {
    case PathKind::Prop: os << p->name; return;
    case PathKind::Inverse: os << '^' << p->name; return;
    case PathKind::Pair:
      os << '(';
      print(os, p->first);
      os << ", ";
      print(os, p->second);
      os << ')';
      return;
    case PathKind::Seq:
      os << '(';
      print(os, p->lhs);
      os << " / ";
      print(os, p->rhs);
      os << ')';
      return;
    case PathKind::Star:
      os << '(';
      print(os, p->lhs);
      os << ")*";
      return;
    case PathKind::Alt:
      os << '(';
      print(os, p->lhs);
      os << " | ";
      print(os, p->rhs);
      os << ')';
      return;
    case PathKind::Diff:
      os << '(';
      print(os, p->lhs);
      os << " \\ ";
      print(os, p->rhs);
      os << ')';
      return;
  }
}

void print(std::ostream& os, const ShapePtr& s) {
  switch (s->kind) {
    case ShapeKind::Top: os << "top"; return;
    case ShapeKind::Name: os << '@' << s->name; return;
    case ShapeKind::Class: os << s->name; return;
    case ShapeKind::Node: os << '{' << s->name << '}'; return;
    case ShapeKind::And:
      os << '(';
      print(os, s->lhs);
      os << " & ";
      print(os, s->rhs);
      os << ')';
      return;
    case ShapeKind::Not: {
      const ShapePtr& a = s->lhs;
      if (a->kind == ShapeKind::Top) {
        os << "bottom";
        return;
      }
      if (a->kind == ShapeKind::And && a->lhs->kind == ShapeKind::Not &&
          a->rhs->kind == ShapeKind::Not) {
        os << '(';
        print(os, a->lhs->lhs);
        os << " | ";
        print(os, a->rhs->lhs);
        os << ')';
        return;
      }
      if (a->kind == ShapeKind::AtLeast && a->count == 1 &&
          a->lhs->kind == ShapeKind::Not) {
        os << "forall ";
        print(os, a->path);
        os << '.';
        print(os, a->lhs->lhs);
        return;
      }
      os << '!';
      print(os, a);
      return;
    }
    case ShapeKind::AtLeast:
      if (s->count == 1)
        os << "exists ";
      else
        os << ">=" << s->count << ' ';
      print(os, s->path);
      if (s->lhs->kind != ShapeKind::Top) {
        os << '.';
        print(os, s->lhs);
      }
      return;
    case ShapeKind::Equals:
      os << "eq(";
      print(os, s->path);
      os << ", " << s->name << ')';
      return;
    case ShapeKind::Disjoint:
      os << "disj(";
      print(os, s->path);
      os << ", " << s->name << ')';
      return;
    case ShapeKind::Closed: {
      os << "closed(";
      for (std::size_t i = 0; i < s->props.size(); ++i)
        os << (i ? ", " : "") << s->props[i];
      os << ')';
      return;
    }
  }
}

void print(std::ostream& os, const TargetPtr& t) {
  switch (t->kind) {
    case TargetKind::Atom:
      os << '(';
      print(os, t->selector);
      os << ", @" << t->shape << ')';
      return;
    case TargetKind::And:
    case TargetKind::Or: {
      os << (t->kind == TargetKind::And ? "and[" : "or[");
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        print(os, t->args[i]);
      }
      os << ']';
      return;
    }
    case TargetKind::Not:
      os << "not ";
      print(os, t->args.front());
      return;
  }
}

void print(std::ostream& os, const ShapesGraphPtr& g) {
  switch (g->kind) {
    case GraphKind::Normal:
      os << "{ ";
      for (const auto& c : g->constraints) {
        os << '@' << c.name << " <-> ";
        print(os, c.body);
        os << "; ";
      }
      os << "targets: ";
      print(os, g->targets);
      os << " }";
      return;
    case GraphKind::And:
    case GraphKind::Or:
      os << (g->kind == GraphKind::And ? "AND(" : "OR(");
      for (std::size_t i = 0; i < g->args.size(); ++i) {
        if (i) os << ", ";
        print(os, g->args[i]);
      }
      os << ')';
      return;
    case GraphKind::Not:
      os << "NOT(";
      print(os, g->args.front());
      os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const ShapePtr& s) {
  std::ostringstream os;
  print(os, s);
  return os.str();
}

std::string to_string(const PathPtr& p) {
  std::ostringstream os;
  print(os, p);
  return os.str();
}

std::string to_string(const TargetPtr& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::string to_string(const ShapesGraphPtr& g) {
  std::ostringstream os;
  print(os, g);
  return os.str();
}

// ---------------------------------------------------------------------------
// Vocabulary

void Vocabulary::merge(const Vocabulary& o) {
  classes.insert(o.classes.begin(), o.classes.end());
  properties.insert(o.properties.begin(), o.properties.end());
  nodes.insert(o.nodes.begin(), o.nodes.end());
  variables.insert(o.variables.begin(), o.variables.end());
  shape_names.insert(o.shape_names.begin(), o.shape_names.end());
  has_closed = has_closed || o.has_closed;
}

namespace {

class VocabularyCollector {
 public:
  Vocabulary vocab;

  void visit(const ShapePtr& s) {
    if (!seen_.insert(s.get()).second) return;
    switch (s->kind) {
      case ShapeKind::Top: return;
      case ShapeKind::Name: vocab.shape_names.insert(s->name); return;
      case ShapeKind::Class: vocab.classes.insert(s->name); return;
      case ShapeKind::Node:
        if (is_variable(s->name))
          vocab.variables.insert(s->name);
        else
          vocab.nodes.insert(s->name);
        return;
      case ShapeKind::And:
        visit(s->lhs);
        visit(s->rhs);
        return;
      case ShapeKind::Not: visit(s->lhs); return;
      case ShapeKind::AtLeast:
        visit(s->path);
        visit(s->lhs);
        return;
      case ShapeKind::Equals:
      case ShapeKind::Disjoint:
        visit(s->path);
        vocab.properties.insert(s->name);
        return;
      case ShapeKind::Closed:
        vocab.has_closed = true;
        vocab.properties.insert(s->props.begin(), s->props.end());
        return;
    }
  }

  void visit(const PathPtr& p) {
    if (!seen_.insert(p.get()).second) return;
    switch (p->kind) {
      case PathKind::Prop:
      case PathKind::Inverse: vocab.properties.insert(p->name); return;
      case PathKind::Pair:
        visit(p->first);
        visit(p->second);
        return;
      case PathKind::Star: visit(p->lhs); return;
      case PathKind::Seq:
      case PathKind::Alt:
      case PathKind::Diff:
        visit(p->lhs);
        visit(p->rhs);
        return;
    }
  }

  void visit(const TargetPtr& t) {
    if (t->kind == TargetKind::Atom) {
      visit(t->selector);
      vocab.shape_names.insert(t->shape);
      return;
    }
    for (const auto& a : t->args) visit(a);
  }

  void visit(const ShapesGraphPtr& g) {
    if (g->kind == GraphKind::Normal) {
      for (const auto& c : g->constraints) {
        vocab.shape_names.insert(c.name);
        visit(c.body);
      }
      visit(g->targets);
      return;
    }
    for (const auto& a : g->args) visit(a);
  }

 private:
  std::set<const void*> seen_;
};

}  // namespace

Vocabulary vocabulary_of(const ShapePtr& s) {
  VocabularyCollector c;
  c.visit(s);
  return c.vocab;
}

Vocabulary vocabulary_of(const PathPtr& p) {
  VocabularyCollector c;
  c.visit(p);
  return c.vocab;
}

Vocabulary vocabulary_of(const TargetPtr& t) {
  VocabularyCollector c;
  c.visit(t);
  return c.vocab;
}

Vocabulary vocabulary_of(const ShapesGraphPtr& g) {
  VocabularyCollector c;
  c.visit(g);
  return c.vocab;
}

// ---------------------------------------------------------------------------
// Sizes and occurrence counts

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

// Counts, over the tree unfolding, how many times `weight` fires. The memo is
// keyed by node identity so shared subterms are processed once.
class TreeCounter {
 public:
  enum class Mode { Nodes, Occurrences };
  TreeCounter(Mode mode, std::string name = {})
      : mode_(mode), name_(std::move(name)) {}

  std::uint64_t count(const ShapePtr& s) {
    if (auto it = memo_.find(s.get()); it != memo_.end()) return it->second;
    std::uint64_t n = mode_ == Mode::Nodes ? 1 : 0;
    switch (s->kind) {
      case ShapeKind::Top:
      case ShapeKind::Name:
      case ShapeKind::Node: break;
      case ShapeKind::Class:
        if (mode_ == Mode::Occurrences && s->name == name_) n = 1;
        break;
      case ShapeKind::And: n = sat_add(n, sat_add(count(s->lhs), count(s->rhs))); break;
      case ShapeKind::Not: n = sat_add(n, count(s->lhs)); break;
      case ShapeKind::AtLeast:
        n = sat_add(n, sat_add(count(s->path), count(s->lhs)));
        break;
      case ShapeKind::Equals:
      case ShapeKind::Disjoint:
        n = sat_add(n, count(s->path));
        if (mode_ == Mode::Occurrences && s->name == name_) n = sat_add(n, 1);
        break;
      case ShapeKind::Closed:
        if (mode_ == Mode::Occurrences &&
            std::binary_search(s->props.begin(), s->props.end(), name_))
          n = sat_add(n, 1);
        break;
    }
    memo_.emplace(s.get(), n);
    return n;
  }

  std::uint64_t count(const PathPtr& p) {
    if (auto it = memo_.find(p.get()); it != memo_.end()) return it->second;
    std::uint64_t n = mode_ == Mode::Nodes ? 1 : 0;
    switch (p->kind) {
      case PathKind::Prop:
      case PathKind::Inverse:
        if (mode_ == Mode::Occurrences && p->name == name_) n = 1;
        break;
      case PathKind::Pair:
        n = sat_add(n, sat_add(count(p->first), count(p->second)));
        break;
      case PathKind::Star: n = sat_add(n, count(p->lhs)); break;
      case PathKind::Seq:
      case PathKind::Alt:
      case PathKind::Diff:
        n = sat_add(n, sat_add(count(p->lhs), count(p->rhs)));
        break;
    }
    memo_.emplace(p.get(), n);
    return n;
  }

  std::uint64_t count(const TargetPtr& t) {
    if (t->kind == TargetKind::Atom)
      return sat_add(mode_ == Mode::Nodes ? 1 : 0, count(t->selector));
    std::uint64_t n = mode_ == Mode::Nodes ? 1 : 0;
    for (const auto& a : t->args) n = sat_add(n, count(a));
    return n;
  }

  std::uint64_t count(const ShapesGraphPtr& g) {
    std::uint64_t n = mode_ == Mode::Nodes ? 1 : 0;
    if (g->kind == GraphKind::Normal) {
      for (const auto& c : g->constraints)
        n = sat_add(n, sat_add(mode_ == Mode::Nodes ? 1 : 0, count(c.body)));
      return sat_add(n, count(g->targets));
    }
    for (const auto& a : g->args) n = sat_add(n, count(a));
    return n;
  }

 private:
  Mode mode_;
  std::string name_;
  std::unordered_map<const void*, std::uint64_t> memo_;
};

class DagCounter {
 public:
  std::uint64_t total = 0;

  void visit(const ShapePtr& s) {
    if (!seen_.insert(s.get()).second) return;
    ++total;
    if (s->lhs) visit(s->lhs);
    if (s->rhs) visit(s->rhs);
    if (s->path) visit(s->path);
  }
  void visit(const PathPtr& p) {
    if (!seen_.insert(p.get()).second) return;
    ++total;
    if (p->lhs) visit(p->lhs);
    if (p->rhs) visit(p->rhs);
    if (p->first) visit(p->first);
    if (p->second) visit(p->second);
  }
  void visit(const TargetPtr& t) {
    ++total;
    if (t->selector) visit(t->selector);
    for (const auto& a : t->args) visit(a);
  }
  void visit(const ShapesGraphPtr& g) {
    ++total;
    for (const auto& c : g->constraints) {
      ++total;
      visit(c.body);
    }
    if (g->targets) visit(g->targets);
    for (const auto& a : g->args) visit(a);
  }

 private:
  std::set<const void*> seen_;
};

}  // namespace

std::uint64_t tree_size(const ShapePtr& s) {
  return TreeCounter(TreeCounter::Mode::Nodes).count(s);
}

std::uint64_t tree_size(const PathPtr& p) {
  return TreeCounter(TreeCounter::Mode::Nodes).count(p);
}

std::uint64_t tree_size(const ShapesGraphPtr& g) {
  return TreeCounter(TreeCounter::Mode::Nodes).count(g);
}

std::uint64_t dag_size(const ShapesGraphPtr& g) {
  DagCounter c;
  c.visit(g);
  return c.total;
}

std::uint64_t count_occurrences(const ShapesGraphPtr& g,
                                const std::string& name) {
  return TreeCounter(TreeCounter::Mode::Occurrences, name).count(g);
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

class Canonicalizer {
 public:
  ShapePtr run(const ShapePtr& s) {
    if (auto it = shapes_.find(s.get()); it != shapes_.end()) return it->second;
    ShapePtr out;
    switch (s->kind) {
      case ShapeKind::Top:
      case ShapeKind::Name:
      case ShapeKind::Class:
      case ShapeKind::Node:
      case ShapeKind::Closed: out = s; break;
      case ShapeKind::And: out = shape::and_(run(s->lhs), run(s->rhs)); break;
      case ShapeKind::Not:
        if (s->lhs->kind == ShapeKind::Not)
          out = run(s->lhs->lhs);
        else
          out = shape::not_(run(s->lhs));
        break;
      case ShapeKind::AtLeast:
        out = shape::at_least(s->count, run(s->path), run(s->lhs));
        break;
      case ShapeKind::Equals: out = shape::equals(run(s->path), s->name); break;
      case ShapeKind::Disjoint:
        out = shape::disjoint(run(s->path), s->name);
        break;
    }
    shapes_.emplace(s.get(), out);
    return out;
  }

  PathPtr run(const PathPtr& p) {
    if (auto it = paths_.find(p.get()); it != paths_.end()) return it->second;
    PathPtr out;
    switch (p->kind) {
      case PathKind::Prop:
      case PathKind::Inverse: out = p; break;
      case PathKind::Pair: out = path::pair(run(p->first), run(p->second)); break;
      case PathKind::Star: out = path::star(run(p->lhs)); break;
      case PathKind::Seq: out = path::seq(run(p->lhs), run(p->rhs)); break;
      case PathKind::Alt: out = path::alt(run(p->lhs), run(p->rhs)); break;
      case PathKind::Diff: out = path::diff(run(p->lhs), run(p->rhs)); break;
    }
    paths_.emplace(p.get(), out);
    return out;
  }

  TargetPtr run(const TargetPtr& t) {
    switch (t->kind) {
      case TargetKind::Atom: return target::atom(run(t->selector), t->shape);
      case TargetKind::And:
      case TargetKind::Or: {
        std::vector<TargetPtr> args;
        for (const auto& a : t->args) args.push_back(run(a));
        return t->kind == TargetKind::And ? target::all(std::move(args))
                                          : target::any(std::move(args));
      }
      case TargetKind::Not:
        if (t->args.front()->kind == TargetKind::Not)
          return run(t->args.front()->args.front());
        return target::not_(run(t->args.front()));
    }
    return t;
  }

  ShapesGraphPtr run(const ShapesGraphPtr& g) {
    switch (g->kind) {
      case GraphKind::Normal: {
        std::vector<Constraint> cs;
        for (const auto& c : g->constraints) cs.push_back({c.name, run(c.body)});
        return graph::normal(std::move(cs), run(g->targets));
      }
      case GraphKind::And: return graph::and_(run(g->args[0]), run(g->args[1]));
      case GraphKind::Or: return graph::or_(run(g->args[0]), run(g->args[1]));
      case GraphKind::Not:
        if (g->args[0]->kind == GraphKind::Not) return run(g->args[0]->args[0]);
        return graph::not_(run(g->args[0]));
    }
    return g;
  }

 private:
  std::unordered_map<const Shape*, ShapePtr> shapes_;
  std::unordered_map<const Path*, PathPtr> paths_;
};

}  // namespace

ShapePtr canonicalize(const ShapePtr& s) { return Canonicalizer().run(s); }
PathPtr canonicalize(const PathPtr& p) { return Canonicalizer().run(p); }
ShapesGraphPtr canonicalize(const ShapesGraphPtr& g) {
  return Canonicalizer().run(g);
}

}  // namespace shaclup
