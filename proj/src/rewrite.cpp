#include "shaclup/rewrite.hpp"

namespace shaclup {

ShapePtr Rewriter::comparison(const ShapePtr& original, const PathPtr& new_path) {
  if (new_path == original->path) return original;
  return original->kind == ShapeKind::Equals
             ? shape::equals(new_path, original->name)
             : shape::disjoint(new_path, original->name);
}

ShapePtr Rewriter::shape(const ShapePtr& s) {
  if (auto it = shapes_.find(s.get()); it != shapes_.end()) return it->second;
  ShapePtr out;
  switch (s->kind) {
    case ShapeKind::Top:
    case ShapeKind::Name:
    case ShapeKind::Class:
    case ShapeKind::Node:
    case ShapeKind::Closed: out = shape_leaf(s); break;
    case ShapeKind::And: {
      ShapePtr a = shape(s->lhs), b = shape(s->rhs);
      out = (a == s->lhs && b == s->rhs) ? s : shape::and_(a, b);
      break;
    }
    case ShapeKind::Not: {
      ShapePtr a = shape(s->lhs);
      out = a == s->lhs ? s : shape::not_(a);
      break;
    }
    case ShapeKind::AtLeast: {
      PathPtr e = path(s->path);
      ShapePtr f = shape(s->lhs);
      out = (e == s->path && f == s->lhs) ? s : shape::at_least(s->count, e, f);
      break;
    }
    case ShapeKind::Equals:
    case ShapeKind::Disjoint: out = comparison(s, path(s->path)); break;
  }
  shapes_.emplace(s.get(), out);
  return out;
}

PathPtr Rewriter::path(const PathPtr& p) {
  if (auto it = paths_.find(p.get()); it != paths_.end()) return it->second;
  PathPtr out;
  switch (p->kind) {
    case PathKind::Prop:
    case PathKind::Inverse: out = path_leaf(p); break;
    case PathKind::Pair: {
      ShapePtr a = shape(p->first), b = shape(p->second);
      out = (a == p->first && b == p->second) ? p : path::pair(a, b);
      break;
    }
    case PathKind::Star: {
      PathPtr a = path(p->lhs);
      out = a == p->lhs ? p : path::star(a);
      break;
    }
    case PathKind::Seq:
    case PathKind::Alt:
    case PathKind::Diff: {
      PathPtr a = path(p->lhs), b = path(p->rhs);
      if (a == p->lhs && b == p->rhs)
        out = p;
      else if (p->kind == PathKind::Seq)
        out = path::seq(a, b);
      else if (p->kind == PathKind::Alt)
        out = path::alt(a, b);
      else
        out = path::diff(a, b);
      break;
    }
  }
  paths_.emplace(p.get(), out);
  return out;
}

TargetPtr Rewriter::target(const TargetPtr& t) {
  if (t->kind == TargetKind::Atom) {
    ShapePtr sel = shape(t->selector);
    std::string name = shape_name(t->shape);
    if (sel == t->selector && name == t->shape) return t;
    return target::atom(sel, name);
  }
  std::vector<TargetPtr> args;
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(target(a));
    changed = changed || args.back() != a;
  }
  if (!changed) return t;
  switch (t->kind) {
    case TargetKind::And: return target::all(std::move(args));
    case TargetKind::Or: return target::any(std::move(args));
    default: return target::not_(args.front());
  }
}

ShapesGraphPtr Rewriter::graph(const ShapesGraphPtr& g) {
  if (g->kind == GraphKind::Normal) {
    std::vector<Constraint> cs;
    bool changed = false;
    for (const auto& c : g->constraints) {
      cs.push_back({shape_name(c.name), shape(c.body)});
      changed = changed || cs.back().name != c.name || cs.back().body != c.body;
    }
    TargetPtr t = target(g->targets);
    if (!changed && t == g->targets) return g;
    return graph::normal(std::move(cs), t);
  }
  std::vector<ShapesGraphPtr> args;
  bool changed = false;
  for (const auto& a : g->args) {
    args.push_back(graph(a));
    changed = changed || args.back() != a;
  }
  if (!changed) return g;
  switch (g->kind) {
    case GraphKind::And: return graph::and_(args[0], args[1]);
    case GraphKind::Or: return graph::or_(args[0], args[1]);
    default: return graph::not_(args[0]);
  }
}

}  // namespace shaclup
