#include "shaclup/shapes_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "shaclup/error.hpp"
#include "shaclup/rewrite.hpp"

namespace shaclup {

std::vector<std::string> check_nonrecursive(const std::vector<Constraint>& constraints) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (!index.emplace(constraints[i].name, i).second)
      throw Error(ErrorKind::InvalidShapesGraph,
                  "shape name '" + constraints[i].name + "' is defined twice");
  }
  std::vector<std::vector<std::size_t>> deps(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (const auto& ref : vocabulary_of(constraints[i].body).shape_names) {
      auto it = index.find(ref);
      if (it == index.end())
        throw Error(ErrorKind::UnboundShapeName,
                    "shape '" + ref + "' referenced by '" + constraints[i].name +
                        "' has no constraint");
      deps[i].push_back(it->second);
    }
    std::sort(deps[i].begin(), deps[i].end());
  }

  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(constraints.size(), Mark::White);
  std::vector<std::size_t> stack;
  std::vector<std::string> order;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    mark[v] = Mark::Grey;
    stack.push_back(v);
    for (std::size_t w : deps[v]) {
      if (mark[w] == Mark::Grey) {
        auto from = std::find(stack.begin(), stack.end(), w);
        std::ostringstream msg;
        msg << "cycle:";
        for (auto it = from; it != stack.end(); ++it)
          msg << ' ' << constraints[*it].name;
        throw Error(ErrorKind::RecursiveConstraints, msg.str());
      }
      if (mark[w] == Mark::White) visit(w);
    }
    stack.pop_back();
    mark[v] = Mark::Black;
    order.push_back(constraints[v].name);
  };
  for (std::size_t i = 0; i < constraints.size(); ++i)
    if (mark[i] == Mark::White) visit(i);
  return order;
}

namespace {

void require_name_free(const ShapePtr& s, const std::string& where) {
  auto names = vocabulary_of(s).shape_names;
  if (!names.empty())
    throw Error(ErrorKind::InvalidShapesGraph,
                where + " mentions shape name '" + *names.begin() + "'");
}

// Shape-property operands must be free of shape names wherever they occur.
void check_pairs(const ShapePtr& s) {
  std::set<const void*> seen;
  std::function<void(const ShapePtr&)> on_shape;
  std::function<void(const PathPtr&)> on_path = [&](const PathPtr& p) {
    if (!seen.insert(p.get()).second) return;
    if (p->kind == PathKind::Pair) {
      require_name_free(p->first, "shape-property operand");
      require_name_free(p->second, "shape-property operand");
    }
    if (p->lhs) on_path(p->lhs);
    if (p->rhs) on_path(p->rhs);
    if (p->first) on_shape(p->first);
    if (p->second) on_shape(p->second);
  };
  on_shape = [&](const ShapePtr& x) {
    if (!seen.insert(x.get()).second) return;
    if (x->lhs) on_shape(x->lhs);
    if (x->rhs) on_shape(x->rhs);
    if (x->path) on_path(x->path);
  };
  on_shape(s);
}

void check_targets(const TargetPtr& t, const std::set<std::string>& defined) {
  if (t->kind == TargetKind::Atom) {
    if (!defined.count(t->shape))
      throw Error(ErrorKind::UnboundShapeName,
                  "target shape '" + t->shape + "' has no constraint");
    require_name_free(t->selector, "target selector");
    check_pairs(t->selector);
    return;
  }
  for (const auto& a : t->args) check_targets(a, defined);
}

}  // namespace

void check_shapes_graph(const ShapesGraphPtr& g) {
  if (g->kind != GraphKind::Normal) {
    for (const auto& a : g->args) check_shapes_graph(a);
    return;
  }
  check_nonrecursive(g->constraints);
  std::set<std::string> defined;
  for (const auto& c : g->constraints) {
    defined.insert(c.name);
    check_pairs(c.body);
  }
  check_targets(g->targets, defined);
}

namespace {

class ShapeRenamer : public Rewriter {
 public:
  explicit ShapeRenamer(const std::map<std::string, std::string>& m) : map_(m) {}

 protected:
  ShapePtr shape_leaf(const ShapePtr& s) override {
    if (s->kind != ShapeKind::Name) return s;
    auto it = map_.find(s->name);
    return it == map_.end() ? s : shape::name(it->second);
  }
  std::string shape_name(const std::string& name) override {
    auto it = map_.find(name);
    return it == map_.end() ? name : it->second;
  }

 private:
  const std::map<std::string, std::string>& map_;
};

}  // namespace

ShapesGraphPtr rename_shapes(const ShapesGraphPtr& g,
                             const std::map<std::string, std::string>& renaming) {
  ShapeRenamer r(renaming);
  return r.graph(g);
}

namespace {

// Renames each Normal operand apart and returns its target formula; the
// constraints are appended to `out`.
TargetPtr flatten(const ShapesGraphPtr& g, std::size_t& counter,
                  std::vector<Constraint>& out) {
  switch (g->kind) {
    case GraphKind::Normal: {
      std::string suffix = "_" + std::to_string(++counter);
      std::map<std::string, std::string> renaming;
      for (const auto& c : g->constraints) renaming[c.name] = c.name + suffix;
      ShapeRenamer r(renaming);
      for (const auto& c : g->constraints)
        out.push_back({renaming[c.name], r.shape(c.body)});
      return r.target(g->targets);
    }
    case GraphKind::And:
    case GraphKind::Or: {
      std::vector<TargetPtr> parts;
      for (const auto& a : g->args) parts.push_back(flatten(a, counter, out));
      return g->kind == GraphKind::And ? target::all(std::move(parts))
                                       : target::any(std::move(parts));
    }
    case GraphKind::Not: return target::not_(flatten(g->args[0], counter, out));
  }
  return target::all({});
}

void collect_conjuncts(const TargetPtr& t, std::vector<TargetPtr>& out) {
  switch (t->kind) {
    case TargetKind::Atom: out.push_back(t); return;
    case TargetKind::And:
      for (const auto& a : t->args) collect_conjuncts(a, out);
      return;
    default:
      throw Error(ErrorKind::UnsupportedTargetShape,
                  "targets contain a disjunction or negation; use normalize only");
  }
}

}  // namespace

ShapesGraphPtr normalize(const ShapesGraphPtr& g) {
  if (g->kind == GraphKind::Normal) return g;
  std::size_t counter = 0;
  std::vector<Constraint> constraints;
  TargetPtr t = flatten(g, counter, constraints);
  return graph::normal(std::move(constraints), t);
}

ShapesGraphPtr rewrite_targets_to_top(const ShapesGraphPtr& g) {
  if (g->kind != GraphKind::Normal)
    throw Error(ErrorKind::UnsupportedTargetShape,
                "target rewriting needs a normal shapes graph");
  std::vector<TargetPtr> atoms;
  collect_conjuncts(g->targets, atoms);

  std::vector<std::string> order;
  std::map<std::string, std::vector<ShapePtr>> selectors;
  for (const auto& a : atoms) {
    auto& sel = selectors[a->shape];
    if (sel.empty()) order.push_back(a->shape);
    bool dup = std::any_of(sel.begin(), sel.end(),
                           [&](const ShapePtr& x) { return equal(x, a->selector); });
    if (!dup) sel.push_back(a->selector);
  }

  std::set<std::string> referenced;
  std::set<std::string> taken;
  for (const auto& c : g->constraints) {
    taken.insert(c.name);
    auto v = vocabulary_of(c.body);
    referenced.insert(v.shape_names.begin(), v.shape_names.end());
  }

  std::vector<Constraint> constraints = g->constraints;
  std::vector<Constraint> extra;
  std::vector<TargetPtr> targets;
  for (const auto& s : order) {
    const auto& sel = selectors[s];
    bool all_top = std::all_of(sel.begin(), sel.end(), [](const ShapePtr& x) {
      return x->kind == ShapeKind::Top;
    });
    if (all_top) {
      targets.push_back(target::atom(shape::top(), s));
      continue;
    }
    auto body_it = std::find_if(constraints.begin(), constraints.end(),
                                [&](const Constraint& c) { return c.name == s; });
    if (body_it == constraints.end())
      throw Error(ErrorKind::UnboundShapeName,
                  "target shape '" + s + "' has no constraint");
    // A shape referenced from other bodies keeps its meaning; the guarded
    // version goes into a fresh shape instead.
    bool shared = referenced.count(s) != 0;
    ShapePtr base = shared ? shape::name(s) : body_it->body;
    std::vector<ShapePtr> parts;
    for (const auto& phi : sel) parts.push_back(shape::or_(shape::not_(phi), base));
    ShapePtr guarded = shape::all_of(parts);
    if (shared) {
      std::string fresh = s + "_top";
      for (int k = 2; taken.count(fresh); ++k) fresh = s + "_top" + std::to_string(k);
      taken.insert(fresh);
      extra.push_back({fresh, guarded});
      targets.push_back(target::atom(shape::top(), fresh));
    } else {
      body_it->body = guarded;
      targets.push_back(target::atom(shape::top(), s));
    }
  }
  constraints.insert(constraints.end(), extra.begin(), extra.end());
  return graph::normal(std::move(constraints), target::all(std::move(targets)));
}

std::string Dialect::fragment() const {
  if (fragment_exptime) return "fragment_exptime";
  if (fragment_noNexp) return "fragment_noNexp";
  return "shaclplus_full";
}

namespace {

struct DialectScan {
  bool plain = true;
  bool no_nexp = true;
  bool exptime = true;
  std::set<const void*> seen;

  void shape(const ShapePtr& s) {
    if (!seen.insert(s.get()).second) return;
    switch (s->kind) {
      case ShapeKind::AtLeast:
        if (s->count != 1) exptime = false;
        path(s->path);
        shape(s->lhs);
        return;
      case ShapeKind::Equals:
      case ShapeKind::Disjoint:
        no_nexp = exptime = false;
        path(s->path);
        return;
      case ShapeKind::Closed: no_nexp = exptime = false; return;
      default:
        if (s->lhs) shape(s->lhs);
        if (s->rhs) shape(s->rhs);
        return;
    }
  }

  void path(const PathPtr& p) {
    if (!seen.insert(p.get()).second) return;
    switch (p->kind) {
      case PathKind::Prop:
      case PathKind::Inverse: return;
      case PathKind::Pair:
        plain = false;
        if (p->first->kind != ShapeKind::Node || p->second->kind != ShapeKind::Node)
          exptime = false;
        shape(p->first);
        shape(p->second);
        return;
      case PathKind::Seq:
      case PathKind::Star:
        no_nexp = exptime = false;
        break;
      case PathKind::Diff: plain = false; break;
      case PathKind::Alt: break;
    }
    if (p->lhs) path(p->lhs);
    if (p->rhs) path(p->rhs);
  }

  static bool plain_selector(const ShapePtr& s) {
    switch (s->kind) {
      case ShapeKind::Node:
      case ShapeKind::Class: return true;
      case ShapeKind::AtLeast:
        return s->count == 1 && s->lhs->kind == ShapeKind::Top &&
               (s->path->kind == PathKind::Prop || s->path->kind == PathKind::Inverse);
      default: return false;
    }
  }

  void target(const TargetPtr& t, bool conjunctive) {
    if (t->kind == TargetKind::Atom) {
      if (!plain_selector(t->selector)) plain = false;
      shape(t->selector);
      return;
    }
    bool still = conjunctive && t->kind == TargetKind::And;
    if (!still) plain = false;
    for (const auto& a : t->args) target(a, still);
  }

  void graph(const ShapesGraphPtr& g) {
    if (g->kind != GraphKind::Normal) {
      plain = false;
      for (const auto& a : g->args) graph(a);
      return;
    }
    for (const auto& c : g->constraints) shape(c.body);
    target(g->targets, true);
  }
};

}  // namespace

Dialect dialect_of(const ShapesGraphPtr& g) {
  DialectScan scan;
  scan.graph(g);
  Dialect d;
  d.plain_shacl = scan.plain;
  d.fragment_noNexp = scan.no_nexp;
  d.fragment_exptime = scan.no_nexp && scan.exptime;
  return d;
}

}  // namespace shaclup
