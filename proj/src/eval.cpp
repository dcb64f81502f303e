#include "shaclup/eval.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "shaclup/error.hpp"
#include "shaclup/shapes_graph.hpp"

namespace shaclup {

Interpretation::Interpretation(const DataGraph& g, const std::set<Node>& extra_nodes) {
  std::set<Node> all = g.nodes();
  all.insert(extra_nodes.begin(), extra_nodes.end());
  nodes_.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].name(), i);
  const std::size_t n = nodes_.size();
  empty_set_ = NodeSet(n);
  empty_relation_ = Relation(n);
  for (const auto& atom : g.atoms()) {
    if (const auto* c = std::get_if<ClassAtom>(&atom)) {
      auto [it, fresh] = classes_.try_emplace(c->cls, n);
      it->second.insert(index_.at(c->node.name()));
    } else {
      const auto& p = std::get<PropertyAtom>(atom);
      auto [it, fresh] = properties_.try_emplace(p.prop, n);
      it->second.rows[index_.at(p.subject.name())].insert(index_.at(p.object.name()));
    }
  }
}

std::optional<std::size_t> Interpretation::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const NodeSet& Interpretation::class_extension(const std::string& cls) const {
  auto it = classes_.find(cls);
  return it == classes_.end() ? empty_set_ : it->second;
}

const Relation& Interpretation::property(const std::string& prop) const {
  auto it = properties_.find(prop);
  return it == properties_.end() ? empty_relation_ : it->second;
}

void Interpretation::set_shape(const std::string& name, NodeSet extension) {
  shapes_[name] = std::move(extension);
}

const NodeSet* Interpretation::shape_extension(const std::string& name) const {
  auto it = shapes_.find(name);
  return it == shapes_.end() ? nullptr : &it->second;
}

namespace {

Relation compose(const Relation& a, const Relation& b) {
  const std::size_t n = a.universe();
  Relation r(n);
  for (std::size_t x = 0; x < n; ++x)
    a.rows[x].for_each([&](std::size_t d) { r.rows[x] |= b.rows[d]; });
  return r;
}

Relation reflexive_transitive_closure(const Relation& e) {
  const std::size_t n = e.universe();
  Relation r(n);
  for (std::size_t x = 0; x < n; ++x) {
    NodeSet reach(n);
    reach.insert(x);
    std::vector<std::size_t> work{x};
    while (!work.empty()) {
      std::size_t v = work.back();
      work.pop_back();
      e.rows[v].for_each([&](std::size_t w) {
        if (!reach.contains(w)) {
          reach.insert(w);
          work.push_back(w);
        }
      });
    }
    r.rows[x] = std::move(reach);
  }
  return r;
}

}  // namespace

const NodeSet& Evaluator::shape(const ShapePtr& s) {
  if (auto it = shapes_.find(s.get()); it != shapes_.end()) return it->second.second;
  const std::size_t n = interp_.size();
  NodeSet out(n);
  switch (s->kind) {
    case ShapeKind::Top: out = NodeSet::full(n); break;
    case ShapeKind::Name: {
      const NodeSet* ext = interp_.shape_extension(s->name);
      if (!ext)
        throw Error(ErrorKind::UnboundShapeName,
                    "shape '" + s->name + "' has no extension in the assignment");
      out = *ext;
      break;
    }
    case ShapeKind::Class: out = interp_.class_extension(s->name); break;
    case ShapeKind::Node:
      if (is_variable(s->name))
        throw Error(ErrorKind::NonGroundAction,
                    "variable " + s->name + " must be substituted before evaluation");
      if (auto i = interp_.index_of(s->name)) out.insert(*i);
      break;
    case ShapeKind::And:
      out = shape(s->lhs);
      out &= shape(s->rhs);
      break;
    case ShapeKind::Not: out = shape(s->lhs).complement(); break;
    case ShapeKind::AtLeast: {
      const Relation& e = path(s->path);
      const NodeSet& filler = shape(s->lhs);
      for (std::size_t c = 0; c < n; ++c) {
        NodeSet succ = e.rows[c];
        succ &= filler;
        if (succ.count() >= s->count) out.insert(c);
      }
      break;
    }
    case ShapeKind::Equals:
    case ShapeKind::Disjoint: {
      const Relation& e = path(s->path);
      const Relation& p = interp_.property(s->name);
      for (std::size_t c = 0; c < n; ++c) {
        bool keep = s->kind == ShapeKind::Equals ? e.rows[c] == p.rows[c]
                                                 : !e.rows[c].intersects(p.rows[c]);
        if (keep) out.insert(c);
      }
      break;
    }
    case ShapeKind::Closed: {
      out = NodeSet::full(n);
      for (const auto& [name, rel] : interp_.properties()) {
        if (std::binary_search(s->props.begin(), s->props.end(), name)) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (!rel.rows[c].empty()) out.erase(c);
      }
      break;
    }
  }
  auto [it, inserted] = shapes_.emplace(s.get(), std::make_pair(s, std::move(out)));
  return it->second.second;
}

const Relation& Evaluator::path(const PathPtr& p) {
  if (auto it = paths_.find(p.get()); it != paths_.end()) return it->second.second;
  const std::size_t n = interp_.size();
  Relation out(n);
  switch (p->kind) {
    case PathKind::Prop: out = interp_.property(p->name); break;
    case PathKind::Inverse: {
      const Relation& r = interp_.property(p->name);
      for (std::size_t a = 0; a < n; ++a)
        r.rows[a].for_each([&](std::size_t b) { out.rows[b].insert(a); });
      break;
    }
    case PathKind::Pair: {
      const NodeSet& first = shape(p->first);
      const NodeSet& second = shape(p->second);
      first.for_each([&](std::size_t a) { out.rows[a] = second; });
      break;
    }
    case PathKind::Seq: {
      const Relation& a = path(p->lhs);
      const Relation& b = path(p->rhs);
      out = compose(a, b);
      break;
    }
    case PathKind::Star: out = reflexive_transitive_closure(path(p->lhs)); break;
    case PathKind::Alt: {
      out = path(p->lhs);
      const Relation& b = path(p->rhs);
      for (std::size_t a = 0; a < n; ++a) out.rows[a] |= b.rows[a];
      break;
    }
    case PathKind::Diff: {
      out = path(p->lhs);
      const Relation& b = path(p->rhs);
      for (std::size_t a = 0; a < n; ++a) out.rows[a].subtract(b.rows[a]);
      break;
    }
  }
  auto [it, inserted] = paths_.emplace(p.get(), std::make_pair(p, std::move(out)));
  return it->second.second;
}

std::set<Node> Assignment::extension(const std::string& shape_name) const {
  std::set<Node> out;
  for (const auto& [name, node] : shape_atoms)
    if (name == shape_name) out.insert(node);
  return out;
}

namespace {

std::set<Node> as_nodes(const std::set<std::string>& names) {
  std::set<Node> out;
  for (const auto& n : names) out.insert(Node(n));
  return out;
}

Interpretation interpretation_of(const Assignment& a, const std::set<Node>& extra) {
  Interpretation interp(a.base, extra);
  std::map<std::string, NodeSet> shapes;
  for (const auto& [name, node] : a.shape_atoms) {
    auto [it, fresh] = shapes.try_emplace(name, interp.size());
    auto idx = interp.index_of(node.name());
    if (!idx)
      throw Error(ErrorKind::InvalidShapesGraph,
                  "shape atom " + name + "(" + node.name() + ") outside the graph");
    it->second.insert(*idx);
  }
  for (auto& [name, ext] : shapes) interp.set_shape(name, std::move(ext));
  return interp;
}

}  // namespace

std::set<std::pair<Node, Node>> eval_path(const PathPtr& p, const Assignment& a) {
  Interpretation interp = interpretation_of(a, as_nodes(vocabulary_of(p).nodes));
  Evaluator ev(interp);
  const Relation& r = ev.path(p);
  std::set<std::pair<Node, Node>> out;
  for (std::size_t x = 0; x < interp.size(); ++x)
    r.rows[x].for_each([&](std::size_t y) {
      out.emplace(interp.nodes()[x], interp.nodes()[y]);
    });
  return out;
}

std::set<Node> eval_shape(const ShapePtr& s, const Assignment& a) {
  Interpretation interp = interpretation_of(a, as_nodes(vocabulary_of(s).nodes));
  Evaluator ev(interp);
  std::set<Node> out;
  ev.shape(s).for_each([&](std::size_t i) { out.insert(interp.nodes()[i]); });
  return out;
}

namespace {

// Extends `interp` with the shape extensions of I_{G,C}.
void assign_shapes(Interpretation& interp, Evaluator& ev,
                   const std::vector<Constraint>& constraints,
                   const std::vector<std::string>& order) {
  std::map<std::string, const Constraint*> by_name;
  for (const auto& c : constraints) by_name[c.name] = &c;
  for (const auto& name : order) {
    NodeSet ext = ev.shape(by_name.at(name)->body);
    interp.set_shape(name, std::move(ext));
  }
}

bool models(const TargetPtr& t, Evaluator& ev, const Interpretation& interp) {
  switch (t->kind) {
    case TargetKind::Atom:
      return ev.shape(t->selector).subset_of(*interp.shape_extension(t->shape));
    case TargetKind::And:
      return std::all_of(t->args.begin(), t->args.end(),
                         [&](const TargetPtr& a) { return models(a, ev, interp); });
    case TargetKind::Or:
      return std::any_of(t->args.begin(), t->args.end(),
                         [&](const TargetPtr& a) { return models(a, ev, interp); });
    case TargetKind::Not: return !models(t->args.front(), ev, interp);
  }
  return false;
}

bool validates_injected(const DataGraph& g, const ShapesGraphPtr& s) {
  switch (s->kind) {
    case GraphKind::Normal: {
      Interpretation interp(g);
      Evaluator ev(interp);
      assign_shapes(interp, ev, s->constraints, check_nonrecursive(s->constraints));
      for (const auto& name : vocabulary_of(s->targets).shape_names)
        if (!interp.shape_extension(name))
          throw Error(ErrorKind::UnboundShapeName,
                      "target shape '" + name + "' has no constraint");
      return models(s->targets, ev, interp);
    }
    case GraphKind::And:
      return std::all_of(s->args.begin(), s->args.end(),
                         [&](const ShapesGraphPtr& a) { return validates_injected(g, a); });
    case GraphKind::Or:
      return std::any_of(s->args.begin(), s->args.end(),
                         [&](const ShapesGraphPtr& a) { return validates_injected(g, a); });
    case GraphKind::Not: return !validates_injected(g, s->args.front());
  }
  return false;
}

}  // namespace

Assignment canonical_assignment(const DataGraph& g,
                                const std::vector<Constraint>& constraints,
                                const std::vector<std::string>* order) {
  std::vector<std::string> computed;
  if (!order) {
    computed = check_nonrecursive(constraints);
    order = &computed;
  }
  Vocabulary v;
  for (const auto& c : constraints) v.merge(vocabulary_of(c.body));
  Interpretation interp(g, as_nodes(v.nodes));
  Evaluator ev(interp);
  assign_shapes(interp, ev, constraints, *order);

  Assignment a;
  a.base = g;
  for (const auto& n : interp.nodes()) a.base.add_node(n);
  for (const auto& name : *order) {
    interp.shape_extension(name)->for_each(
        [&](std::size_t i) { a.shape_atoms.emplace(name, interp.nodes()[i]); });
  }
  return a;
}

DataGraph with_nodes_of(const DataGraph& g, const ShapesGraphPtr& s) {
  DataGraph out = g;
  for (const auto& n : vocabulary_of(s).nodes) {
    if (!out.contains_node(Node(n))) {
      spdlog::debug("adding node '{}' of the shapes graph to the data graph", n);
      out.add_node(Node(n));
    }
  }
  return out;
}

bool validates(const DataGraph& g, const ShapesGraphPtr& s) {
  return validates_injected(with_nodes_of(g, s), s);
}

namespace {

void collect_violations(const TargetPtr& t, Evaluator& ev, const Interpretation& interp,
                        std::vector<TargetViolation>& out) {
  if (t->kind != TargetKind::Atom) {
    for (const auto& a : t->args) collect_violations(a, ev, interp, out);
    return;
  }
  NodeSet missing = ev.shape(t->selector);
  missing.subtract(*interp.shape_extension(t->shape));
  if (missing.empty()) return;
  TargetViolation v{to_string(t), {}};
  missing.for_each([&](std::size_t i) { v.nodes.push_back(interp.nodes()[i]); });
  out.push_back(std::move(v));
}

}  // namespace

std::vector<TargetViolation> explain(const DataGraph& g, const ShapesGraphPtr& s) {
  ShapesGraphPtr normal = normalize(s);
  DataGraph injected = with_nodes_of(g, normal);
  Interpretation interp(injected);
  Evaluator ev(interp);
  assign_shapes(interp, ev, normal->constraints, check_nonrecursive(normal->constraints));
  std::vector<TargetViolation> out;
  collect_violations(normal->targets, ev, interp, out);
  return out;
}

}  // namespace shaclup
