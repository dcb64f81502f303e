#include "shaclup/json_io.hpp"

#include <fstream>
#include <sstream>

#include "shaclup/error.hpp"
#include "shaclup/shapes_graph.hpp"

namespace shaclup {

namespace {

[[noreturn]] void bad(const std::string& what, const json& j) {
  std::string excerpt = j.dump();
  if (excerpt.size() > 80) excerpt = excerpt.substr(0, 77) + "...";
  throw Error(ErrorKind::Syntax, what + " in " + excerpt);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'", j);
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string", j);
  std::string s = v.get<std::string>();
  if (s.empty()) bad(std::string("field '") + key + "' is empty", j);
  return s;
}

std::string type_of(const json& j) {
  if (!j.is_object()) bad("expected an object", j);
  return string_field(j, "type");
}

const json& list_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.empty())
    bad(std::string("field '") + key + "' must be a non-empty list", j);
  return v;
}

}  // namespace

ShapePtr shape_from_json(const json& j) {
  const std::string t = type_of(j);
  if (t == "top") return shape::top();
  if (t == "bottom") return shape::bottom();
  if (t == "shape") return shape::name(string_field(j, "name"));
  if (t == "class") return shape::cls(string_field(j, "name"));
  if (t == "node") return shape::node(string_field(j, "name"));
  if (t == "and" || t == "or") {
    std::vector<ShapePtr> parts;
    for (const auto& a : list_field(j, "args")) parts.push_back(shape_from_json(a));
    return t == "and" ? shape::all_of(parts) : shape::any_of(parts);
  }
  if (t == "not") return shape::not_(shape_from_json(field(j, "arg")));
  if (t == "at_least" || t == "exists" || t == "forall") {
    PathPtr e = path_from_json(field(j, "path"));
    if (t == "forall") return shape::forall(e, shape_from_json(field(j, "shape")));
    ShapePtr filler = j.contains("shape") ? shape_from_json(j.at("shape")) : shape::top();
    if (t == "exists") return shape::exists(e, filler);
    const json& n = field(j, "n");
    if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0 ||
        n.get<std::uint64_t>() > 0xffffffffu)
      bad("'n' must be a positive integer", j);
    return shape::at_least(static_cast<std::uint32_t>(n.get<std::uint64_t>()), e, filler);
  }
  if (t == "equals" || t == "disjoint") {
    PathPtr e = path_from_json(field(j, "path"));
    std::string p = string_field(j, "prop");
    return t == "equals" ? shape::equals(e, p) : shape::disjoint(e, p);
  }
  if (t == "closed") {
    const json& props = field(j, "props");
    if (!props.is_array()) bad("'props' must be a list", j);
    std::vector<std::string> names;
    for (const auto& p : props) {
      if (!p.is_string()) bad("property names must be strings", j);
      names.push_back(p.get<std::string>());
    }
    return shape::closed(std::move(names));
  }
  bad("unknown shape type '" + t + "'", j);
}

PathPtr path_from_json(const json& j) {
  const std::string t = type_of(j);
  if (t == "prop") return path::prop(string_field(j, "name"));
  if (t == "inverse") return path::inverse(string_field(j, "name"));
  if (t == "pair")
    return path::pair(shape_from_json(field(j, "first")), shape_from_json(field(j, "second")));
  if (t == "singleton") return path::singleton(string_field(j, "first"), string_field(j, "second"));
  if (t == "seq" || t == "alt") {
    const json& args = list_field(j, "args");
    PathPtr acc = path_from_json(args[0]);
    for (std::size_t i = 1; i < args.size(); ++i)
      acc = t == "seq" ? path::seq(acc, path_from_json(args[i]))
                       : path::alt(acc, path_from_json(args[i]));
    return acc;
  }
  if (t == "star") return path::star(path_from_json(field(j, "arg")));
  if (t == "diff")
    return path::diff(path_from_json(field(j, "left")), path_from_json(field(j, "right")));
  bad("unknown path type '" + t + "'", j);
}

TargetPtr targets_from_json(const json& j) {
  if (j.is_array()) {
    std::vector<TargetPtr> parts;
    for (const auto& a : j) parts.push_back(targets_from_json(a));
    return target::all(std::move(parts));
  }
  if (!j.is_object()) bad("expected a target", j);
  if (!j.contains("type") || j.at("type") == "target")
    return target::atom(shape_from_json(field(j, "selector")), string_field(j, "shape"));
  const std::string t = type_of(j);
  if (t == "and" || t == "or") {
    const json& args = field(j, "args");
    if (!args.is_array()) bad("'args' must be a list", j);
    std::vector<TargetPtr> parts;
    for (const auto& a : args) parts.push_back(targets_from_json(a));
    return t == "and" ? target::all(std::move(parts)) : target::any(std::move(parts));
  }
  if (t == "not") return target::not_(targets_from_json(field(j, "arg")));
  bad("unknown target type '" + t + "'", j);
}

namespace {

ShapesGraphPtr combine_from_json(const json& j) {
  if (!j.is_object()) bad("expected a shapes graph", j);
  if (j.contains("constraints") || j.contains("combine")) return shapes_graph_from_json(j);
  const std::string t = type_of(j);
  if (t == "and" || t == "or") {
    const json& args = list_field(j, "args");
    ShapesGraphPtr acc = combine_from_json(args[0]);
    for (std::size_t i = 1; i < args.size(); ++i)
      acc = t == "and" ? graph::and_(acc, combine_from_json(args[i]))
                       : graph::or_(acc, combine_from_json(args[i]));
    return acc;
  }
  if (t == "not") return graph::not_(combine_from_json(field(j, "arg")));
  bad("unknown shapes-graph combinator '" + t + "'", j);
}

}  // namespace

ShapesGraphPtr shapes_graph_from_json(const json& j) {
  if (!j.is_object()) bad("expected a shapes graph object", j);
  if (j.contains("combine")) return combine_from_json(j.at("combine"));
  std::vector<Constraint> constraints;
  if (j.contains("constraints")) {
    const json& cs = j.at("constraints");
    if (!cs.is_array()) bad("'constraints' must be a list", j);
    for (const auto& c : cs)
      constraints.push_back({string_field(c, "name"), shape_from_json(field(c, "body"))});
  }
  TargetPtr t = j.contains("targets") ? targets_from_json(j.at("targets")) : target::all({});
  return graph::normal(std::move(constraints), t);
}

Action actions_from_json(const json& j) {
  if (!j.is_array()) bad("an action list must be a JSON list", j);
  Action out;
  for (const auto& step : j) {
    const std::string op = string_field(step, "op");
    if (op == "add_class" || op == "del_class") {
      std::string cls = string_field(step, "class");
      ShapePtr s = shape_from_json(field(step, "shape"));
      out.steps.emplace_back(op == "add_class" ? action::add_class(cls, s)
                                               : action::del_class(cls, s));
    } else if (op == "add_prop" || op == "del_prop") {
      std::string prop = string_field(step, "prop");
      PathPtr e = path_from_json(field(step, "path"));
      out.steps.emplace_back(op == "add_prop" ? action::add_prop(prop, e)
                                              : action::del_prop(prop, e));
    } else if (op == "cond") {
      ShapesGraphPtr g = shapes_graph_from_json(field(step, "if"));
      Action then_branch = actions_from_json(field(step, "then"));
      Action else_branch =
          step.contains("else") ? actions_from_json(step.at("else")) : Action{};
      out.steps.emplace_back(action::cond(g, then_branch, else_branch));
    } else {
      bad("unknown action op '" + op + "'", step);
    }
  }
  return out;
}

json to_json(const ShapePtr& s) {
  switch (s->kind) {
    case ShapeKind::Top: return {{"type", "top"}};
    case ShapeKind::Name: return {{"type", "shape"}, {"name", s->name}};
    case ShapeKind::Class: return {{"type", "class"}, {"name", s->name}};
    case ShapeKind::Node: return {{"type", "node"}, {"name", s->name}};
    case ShapeKind::And:
      return {{"type", "and"}, {"args", json::array({to_json(s->lhs), to_json(s->rhs)})}};
    case ShapeKind::Not: return {{"type", "not"}, {"arg", to_json(s->lhs)}};
    case ShapeKind::AtLeast:
      return {{"type", "at_least"},
              {"n", s->count},
              {"path", to_json(s->path)},
              {"shape", to_json(s->lhs)}};
    case ShapeKind::Equals:
    case ShapeKind::Disjoint:
      return {{"type", s->kind == ShapeKind::Equals ? "equals" : "disjoint"},
              {"path", to_json(s->path)},
              {"prop", s->name}};
    case ShapeKind::Closed: return {{"type", "closed"}, {"props", s->props}};
  }
  return nullptr;
}

json to_json(const PathPtr& p) {
  switch (p->kind) {
    case PathKind::Prop: return {{"type", "prop"}, {"name", p->name}};
    case PathKind::Inverse: return {{"type", "inverse"}, {"name", p->name}};
    case PathKind::Pair:
      return {{"type", "pair"}, {"first", to_json(p->first)}, {"second", to_json(p->second)}};
    case PathKind::Seq:
    case PathKind::Alt:
      return {{"type", p->kind == PathKind::Seq ? "seq" : "alt"},
              {"args", json::array({to_json(p->lhs), to_json(p->rhs)})}};
    case PathKind::Star: return {{"type", "star"}, {"arg", to_json(p->lhs)}};
    case PathKind::Diff:
      return {{"type", "diff"}, {"left", to_json(p->lhs)}, {"right", to_json(p->rhs)}};
  }
  return nullptr;
}

namespace {

bool is_atom_list(const TargetPtr& t) {
  if (t->kind != TargetKind::And) return false;
  for (const auto& a : t->args)
    if (a->kind != TargetKind::Atom) return false;
  return true;
}

json target_atom_json(const TargetPtr& t) {
  return {{"selector", to_json(t->selector)}, {"shape", t->shape}};
}

json graph_tree_json(const ShapesGraphPtr& g) {
  switch (g->kind) {
    case GraphKind::Normal: return to_json(g);
    case GraphKind::And:
    case GraphKind::Or: {
      json args = json::array();
      for (const auto& a : g->args) args.push_back(graph_tree_json(a));
      return {{"type", g->kind == GraphKind::And ? "and" : "or"}, {"args", args}};
    }
    case GraphKind::Not: return {{"type", "not"}, {"arg", graph_tree_json(g->args[0])}};
  }
  return nullptr;
}

}  // namespace

json to_json(const TargetPtr& t) {
  if (is_atom_list(t)) {
    json list = json::array();
    for (const auto& a : t->args) list.push_back(target_atom_json(a));
    return list;
  }
  switch (t->kind) {
    case TargetKind::Atom: {
      json j = target_atom_json(t);
      j["type"] = "target";
      return j;
    }
    case TargetKind::And:
    case TargetKind::Or: {
      json args = json::array();
      for (const auto& a : t->args) args.push_back(to_json(a));
      return {{"type", t->kind == TargetKind::And ? "and" : "or"}, {"args", args}};
    }
    case TargetKind::Not: return {{"type", "not"}, {"arg", to_json(t->args[0])}};
  }
  return nullptr;
}

json to_json(const ShapesGraphPtr& g) {
  if (g->kind != GraphKind::Normal) return {{"combine", graph_tree_json(g)}};
  json cs = json::array();
  for (const auto& c : g->constraints) cs.push_back({{"name", c.name}, {"body", to_json(c.body)}});
  return {{"constraints", cs}, {"targets", to_json(g->targets)}};
}

json to_json(const Action& a) {
  json list = json::array();
  for (const auto& step : a.steps) {
    if (const auto* b = std::get_if<BasicAction>(&step)) {
      static const char* ops[] = {"add_class", "del_class", "add_prop", "del_prop"};
      json j = {{"op", ops[static_cast<int>(b->kind)]}};
      if (b->on_class()) {
        j["class"] = b->name;
        j["shape"] = to_json(b->shape);
      } else {
        j["prop"] = b->name;
        j["path"] = to_json(b->path);
      }
      list.push_back(j);
    } else {
      const auto& c = std::get<Conditional>(step);
      list.push_back({{"op", "cond"},
                      {"if", to_json(c.condition)},
                      {"then", to_json(c.then_branch)},
                      {"else", to_json(c.else_branch)}});
    }
  }
  return list;
}

namespace {

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Syntax, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

ShapesGraphPtr parse_shapes_graph(std::string_view text) {
  ShapesGraphPtr g = shapes_graph_from_json(parse_text(text));
  check_shapes_graph(g);
  return g;
}

Action parse_actions(std::string_view text) {
  Action a = actions_from_json(parse_text(text));
  check_action(a);
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shaclup
