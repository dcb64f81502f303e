#include "shaclup/actions.hpp"

#include <sstream>

#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/rewrite.hpp"
#include "shaclup/shapes_graph.hpp"

namespace shaclup {

namespace action {

BasicAction add_class(std::string cls, ShapePtr selector) {
  return {BasicKind::AddClass, std::move(cls), std::move(selector), nullptr};
}
BasicAction del_class(std::string cls, ShapePtr selector) {
  return {BasicKind::DelClass, std::move(cls), std::move(selector), nullptr};
}
BasicAction add_prop(std::string prop, PathPtr path) {
  return {BasicKind::AddProp, std::move(prop), nullptr, std::move(path)};
}
BasicAction del_prop(std::string prop, PathPtr path) {
  return {BasicKind::DelProp, std::move(prop), nullptr, std::move(path)};
}

Action seq(std::vector<Step> steps) { return Action{std::move(steps)}; }

Action concat(const Action& a, const Action& b) {
  Action out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

Conditional cond(ShapesGraphPtr condition, Action then_branch, Action else_branch) {
  return Conditional{std::move(condition), std::move(then_branch),
                     std::move(else_branch)};
}

}  // namespace action

namespace {

template <typename OnBasic, typename OnGraph>
void walk(const Action& a, OnBasic&& on_basic, OnGraph&& on_graph) {
  for (const auto& step : a.steps) {
    if (const auto* b = std::get_if<BasicAction>(&step)) {
      on_basic(*b);
    } else {
      const auto& c = std::get<Conditional>(step);
      on_graph(c.condition);
      walk(c.then_branch, on_basic, on_graph);
      walk(c.else_branch, on_basic, on_graph);
    }
  }
}

Vocabulary vocabulary_of_basic(const BasicAction& b) {
  Vocabulary v = b.on_class() ? vocabulary_of(b.shape) : vocabulary_of(b.path);
  if (b.on_class())
    v.classes.insert(b.name);
  else
    v.properties.insert(b.name);
  return v;
}

}  // namespace

Vocabulary vocabulary_of(const Action& a) {
  Vocabulary v;
  walk(
      a, [&](const BasicAction& b) { v.merge(vocabulary_of_basic(b)); },
      [&](const ShapesGraphPtr& g) { v.merge(vocabulary_of(g)); });
  return v;
}

std::set<std::string> variables_of(const Action& a) { return vocabulary_of(a).variables; }

std::set<std::string> nodes_of(const Action& a) { return vocabulary_of(a).nodes; }

bool is_ground(const Action& a) { return variables_of(a).empty(); }

namespace {

class VariableBinder : public Rewriter {
 public:
  explicit VariableBinder(const Substitution& sigma) : sigma_(sigma) {}

 protected:
  ShapePtr shape_leaf(const ShapePtr& s) override {
    if (s->kind != ShapeKind::Node || !is_variable(s->name)) return s;
    return shape::node(sigma_.at(s->name));
  }

 private:
  const Substitution& sigma_;
};

Action bind(const Action& a, VariableBinder& binder) {
  Action out;
  for (const auto& step : a.steps) {
    if (const auto* b = std::get_if<BasicAction>(&step)) {
      BasicAction nb = *b;
      if (nb.shape) nb.shape = binder.shape(nb.shape);
      if (nb.path) nb.path = binder.path(nb.path);
      out.steps.emplace_back(std::move(nb));
    } else {
      const auto& c = std::get<Conditional>(step);
      out.steps.emplace_back(Conditional{binder.graph(c.condition),
                                         bind(c.then_branch, binder),
                                         bind(c.else_branch, binder)});
    }
  }
  return out;
}

}  // namespace

Action ground(const Action& a, const Substitution& sigma) {
  std::string missing;
  for (const auto& v : variables_of(a))
    if (!sigma.count(v)) missing += (missing.empty() ? "" : ", ") + v;
  if (!missing.empty())
    throw Error(ErrorKind::IncompleteSubstitution, "no value for " + missing);
  for (const auto& [var, node] : sigma)
    if (is_variable(node))
      throw Error(ErrorKind::IncompleteSubstitution,
                  var + " is mapped to the variable " + node);
  VariableBinder binder(sigma);
  return bind(a, binder);
}

void check_action(const Action& a) {
  walk(
      a,
      [](const BasicAction& b) {
        auto names = vocabulary_of_basic(b).shape_names;
        if (!names.empty())
          throw Error(ErrorKind::InvalidShapesGraph,
                      "action " + to_string(b) + " mentions shape name '" +
                          *names.begin() + "'");
      },
      [](const ShapesGraphPtr& g) { check_shapes_graph(g); });
}

DataGraph apply_basic(const DataGraph& g, const BasicAction& b) {
  Vocabulary v = vocabulary_of_basic(b);
  if (!v.variables.empty())
    throw Error(ErrorKind::NonGroundAction,
                "cannot apply " + to_string(b) + ": it has variables");
  DataGraph out = g;
  for (const auto& n : v.nodes) out.add_node(Node(n));
  Interpretation interp(out);
  Evaluator ev(interp);
  const auto& nodes = interp.nodes();
  if (b.on_class()) {
    ev.shape(b.shape).for_each([&](std::size_t i) {
      ClassAtom atom{b.name, nodes[i]};
      if (b.is_addition())
        out.add(atom);
      else
        out.remove(atom);
    });
  } else {
    const Relation& r = ev.path(b.path);
    for (std::size_t x = 0; x < nodes.size(); ++x) {
      r.rows[x].for_each([&](std::size_t y) {
        PropertyAtom atom{b.name, nodes[x], nodes[y]};
        if (b.is_addition())
          out.add(atom);
        else
          out.remove(atom);
      });
    }
  }
  return out;
}

namespace {

DataGraph apply_steps(DataGraph current, const Action& a) {
  for (const auto& step : a.steps) {
    if (const auto* b = std::get_if<BasicAction>(&step)) {
      current = apply_basic(current, *b);
      continue;
    }
    const auto& c = std::get<Conditional>(step);
    const Action& branch = validates(current, c.condition) ? c.then_branch : c.else_branch;
    current = apply_steps(std::move(current), branch);
  }
  return current;
}

}  // namespace

DataGraph apply(const DataGraph& g, const Action& a) {
  Vocabulary v = vocabulary_of(a);
  if (!v.variables.empty())
    throw Error(ErrorKind::NonGroundAction,
                "cannot apply an action with variable " + *v.variables.begin());
  // Every node of the action joins the domain up front, including nodes of
  // branches that are not taken, so the domain does not depend on the branch.
  DataGraph current = g;
  for (const auto& n : v.nodes) current.add_node(Node(n));
  return apply_steps(std::move(current), a);
}

DataGraph pad_fresh(const DataGraph& g, std::size_t k) {
  DataGraph out = g;
  for (std::size_t i = 1; i <= k; ++i) out.add_node(Node("_fresh" + std::to_string(i)));
  return out;
}

std::string to_string(const BasicAction& b) {
  std::string arrow = b.is_addition() ? " <+ " : " <- ";
  if (b.on_class()) return "(" + b.name + arrow + to_string(b.shape) + ")";
  return "(" + b.name + arrow + to_string(b.path) + ")";
}

std::string to_string(const Action& a) {
  if (a.empty()) return "empty";
  std::ostringstream os;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (i) os << " . ";
    if (const auto* b = std::get_if<BasicAction>(&a.steps[i])) {
      os << to_string(*b);
    } else {
      const auto& c = std::get<Conditional>(a.steps[i]);
      os << to_string(c.condition) << " ? [" << to_string(c.then_branch) << "] ["
         << to_string(c.else_branch) << "]";
    }
  }
  return os.str();
}

bool equal(const Action& a, const Action& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto& x = a.steps[i];
    const auto& y = b.steps[i];
    if (x.index() != y.index()) return false;
    if (const auto* bx = std::get_if<BasicAction>(&x)) {
      const auto& by = std::get<BasicAction>(y);
      if (bx->kind != by.kind || bx->name != by.name) return false;
      if (bx->on_class() ? !equal(bx->shape, by.shape) : !equal(bx->path, by.path))
        return false;
    } else {
      const auto& cx = std::get<Conditional>(x);
      const auto& cy = std::get<Conditional>(y);
      if (!equal(cx.condition, cy.condition) || !equal(cx.then_branch, cy.then_branch) ||
          !equal(cx.else_branch, cy.else_branch))
        return false;
    }
  }
  return true;
}

}  // namespace shaclup
