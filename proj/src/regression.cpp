#include "shaclup/regression.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "shaclup/error.hpp"
#include "shaclup/rewrite.hpp"

namespace shaclup {

namespace {

class ClassSubstitution : public Rewriter {
 public:
  ClassSubstitution(const std::string& cls, ShapePtr replacement)
      : cls_(cls), replacement_(std::move(replacement)) {}

 protected:
  ShapePtr shape_leaf(const ShapePtr& s) override {
    return s->kind == ShapeKind::Class && s->name == cls_ ? replacement_ : s;
  }

 private:
  const std::string& cls_;
  ShapePtr replacement_;
};

class PropertySubstitution : public Rewriter {
 public:
  PropertySubstitution(const std::string& prop, PathPtr replacement)
      : prop_(prop),
        replacement_(std::move(replacement)),
        bare_(replacement_->kind == PathKind::Prop) {}

 protected:
  PathPtr path_leaf(const PathPtr& p) override {
    if (p->name != prop_) return p;
    if (p->kind == PathKind::Prop) return replacement_;
    if (!inverse_) inverse_ = path::invert(replacement_);
    return inverse_;
  }

  ShapePtr shape_leaf(const ShapePtr& s) override {
    if (s->kind == ShapeKind::Closed && !bare_)
      throw Error(ErrorKind::UnsubstitutablePosition,
                  "cannot substitute property '" + prop_ + "' under " + to_string(s));
    if (s->kind == ShapeKind::Closed &&
        std::binary_search(s->props.begin(), s->props.end(), prop_)) {
      std::vector<std::string> props = s->props;
      std::replace(props.begin(), props.end(), prop_, replacement_->name);
      return shape::closed(std::move(props));
    }
    return s;
  }

  ShapePtr comparison(const ShapePtr& original, const PathPtr& new_path) override {
    if (original->name != prop_) return Rewriter::comparison(original, new_path);
    if (!bare_)
      throw Error(ErrorKind::UnsubstitutablePosition,
                  "property '" + prop_ + "' is the compared property of " +
                      to_string(original));
    return original->kind == ShapeKind::Equals
               ? shape::equals(new_path, replacement_->name)
               : shape::disjoint(new_path, replacement_->name);
  }

 private:
  const std::string& prop_;
  PathPtr replacement_;
  PathPtr inverse_;
  bool bare_;
};

ShapesGraphPtr substitute_basic(const ShapesGraphPtr& s, const BasicAction& b) {
  switch (b.kind) {
    case BasicKind::AddClass:
      return substitute(s, b.name, shape::or_(shape::cls(b.name), b.shape));
    case BasicKind::DelClass:
      return substitute(s, b.name, shape::and_(shape::cls(b.name), shape::not_(b.shape)));
    case BasicKind::AddProp:
      return substitute(s, b.name, path::alt(path::prop(b.name), b.path));
    case BasicKind::DelProp:
      return substitute(s, b.name, path::diff(path::prop(b.name), b.path));
  }
  return s;
}

void require_ground(const Action& a) {
  auto vars = variables_of(a);
  if (!vars.empty())
    throw Error(ErrorKind::NonGroundAction,
                "regression needs a ground action; " + *vars.begin() + " is free");
}

Action suffix(const Action& a, std::size_t from) {
  Action out;
  out.steps.assign(a.steps.begin() + static_cast<std::ptrdiff_t>(from), a.steps.end());
  return out;
}

ShapesGraphPtr regress_from(const ShapesGraphPtr& s, const Action& a, std::size_t i,
                            std::uint64_t& count) {
  if (i == a.steps.size()) return s;
  if (const auto* c = std::get_if<Conditional>(&a.steps[i])) {
    Action rest = suffix(a, i + 1);
    ShapesGraphPtr t1 = regress_from(s, action::concat(c->then_branch, rest), 0, count);
    ShapesGraphPtr t2 = regress_from(s, action::concat(c->else_branch, rest), 0, count);
    return graph::and_(graph::or_(graph::not_(c->condition), t1),
                       graph::or_(c->condition, t2));
  }
  ShapesGraphPtr tail = regress_from(s, a, i + 1, count);
  ++count;
  return substitute_basic(tail, std::get<BasicAction>(a.steps[i]));
}

}  // namespace

ShapesGraphPtr substitute(const ShapesGraphPtr& s, const std::string& cls,
                          const ShapePtr& replacement) {
  ClassSubstitution r(cls, replacement);
  return r.graph(s);
}

ShapesGraphPtr substitute(const ShapesGraphPtr& s, const std::string& prop,
                          const PathPtr& replacement) {
  PropertySubstitution r(prop, replacement);
  return r.graph(s);
}

RegressedGraph regress(const ShapesGraphPtr& s, const Action& a) {
  require_ground(a);
  RegressedGraph out;
  out.result = regress_from(s, a, 0, out.stats.substitutions);
  out.stats.tree_size_before = tree_size(s);
  out.stats.tree_size_after = tree_size(out.result);
  out.stats.dag_size_after = dag_size(out.result);
  out.stats.growth = static_cast<double>(out.stats.tree_size_after) /
                     static_cast<double>(std::max<std::uint64_t>(1, out.stats.tree_size_before));
  return out;
}

std::uint64_t LinearEncoding::size() const {
  std::uint64_t total = tree_size(core);
  for (const auto& d : defs)
    total += d.on_class() ? tree_size(d.class_body) : tree_size(d.prop_body);
  return total;
}

namespace {

class Renamer : public Rewriter {
 public:
  explicit Renamer(const std::map<std::string, std::string>& classes,
                   const std::map<std::string, std::string>& props)
      : classes_(classes), props_(props) {}

 protected:
  ShapePtr shape_leaf(const ShapePtr& s) override {
    if (s->kind == ShapeKind::Class) {
      auto it = classes_.find(s->name);
      return it == classes_.end() ? s : shape::cls(it->second);
    }
    if (s->kind == ShapeKind::Closed) {
      std::vector<std::string> props = s->props;
      bool changed = false;
      for (auto& p : props) {
        auto it = props_.find(p);
        if (it != props_.end()) {
          p = it->second;
          changed = true;
        }
      }
      return changed ? shape::closed(std::move(props)) : s;
    }
    return s;
  }
  PathPtr path_leaf(const PathPtr& p) override {
    auto it = props_.find(p->name);
    if (it == props_.end()) return p;
    return p->kind == PathKind::Prop ? path::prop(it->second) : path::inverse(it->second);
  }
  ShapePtr comparison(const ShapePtr& original, const PathPtr& new_path) override {
    auto it = props_.find(original->name);
    if (it == props_.end()) return Rewriter::comparison(original, new_path);
    return original->kind == ShapeKind::Equals ? shape::equals(new_path, it->second)
                                               : shape::disjoint(new_path, it->second);
  }

 private:
  const std::map<std::string, std::string>& classes_;
  const std::map<std::string, std::string>& props_;
};

class LinearEncoder {
 public:
  LinearEncoder(const ShapesGraphPtr& s, const Action& a) : s_(s) {
    Vocabulary v = vocabulary_of(s);
    v.merge(vocabulary_of(a));
    taken_.insert(v.classes.begin(), v.classes.end());
    taken_.insert(v.properties.begin(), v.properties.end());
  }

  ShapesGraphPtr encode(const Action& a, std::size_t i,
                        std::map<std::string, std::string> classes,
                        std::map<std::string, std::string> props) {
    for (; i < a.steps.size(); ++i) {
      if (const auto* c = std::get_if<Conditional>(&a.steps[i])) {
        Renamer r(classes, props);
        ShapesGraphPtr cond = r.graph(c->condition);
        Action rest = suffix(a, i + 1);
        ShapesGraphPtr t1 = encode(action::concat(c->then_branch, rest), 0, classes, props);
        ShapesGraphPtr t2 = encode(action::concat(c->else_branch, rest), 0, classes, props);
        return graph::and_(graph::or_(graph::not_(cond), t1), graph::or_(cond, t2));
      }
      const auto& b = std::get<BasicAction>(a.steps[i]);
      Renamer r(classes, props);
      Definition d;
      d.kind = b.kind;
      d.name = fresh(b.name);
      if (b.on_class()) {
        d.base = current(classes, b.name);
        ShapePtr phi = r.shape(b.shape);
        d.class_body = b.is_addition()
                           ? shape::or_(shape::cls(d.base), phi)
                           : shape::and_(shape::cls(d.base), shape::not_(phi));
        classes[b.name] = d.name;
      } else {
        d.base = current(props, b.name);
        PathPtr e = r.path(b.path);
        d.prop_body = b.is_addition() ? path::alt(path::prop(d.base), e)
                                      : path::diff(path::prop(d.base), e);
        props[b.name] = d.name;
      }
      defs.push_back(std::move(d));
    }
    Renamer r(classes, props);
    return r.graph(s_);
  }

  std::vector<Definition> defs;

 private:
  static std::string current(const std::map<std::string, std::string>& m,
                             const std::string& name) {
    auto it = m.find(name);
    return it == m.end() ? name : it->second;
  }

  std::string fresh(const std::string& base) {
    std::string name;
    do {
      name = base + "__u" + std::to_string(++counter_);
    } while (taken_.count(name));
    taken_.insert(name);
    return name;
  }

  ShapesGraphPtr s_;
  std::set<std::string> taken_;
  std::size_t counter_ = 0;
};

}  // namespace

LinearEncoding regress_linear(const ShapesGraphPtr& s, const Action& a) {
  require_ground(a);
  // The direct regression is linear in DAG size; running it surfaces exactly
  // the positions it rejects.
  regress(s, a);
  LinearEncoder enc(s, a);
  LinearEncoding out;
  out.core = enc.encode(a, 0, {}, {});
  out.defs = std::move(enc.defs);
  return out;
}

ShapesGraphPtr unfold(const LinearEncoding& enc) {
  ShapesGraphPtr g = enc.core;
  for (auto it = enc.defs.rbegin(); it != enc.defs.rend(); ++it) {
    g = it->on_class() ? substitute(g, it->name, it->class_body)
                       : substitute(g, it->name, it->prop_body);
  }
  return g;
}

}  // namespace shaclup
