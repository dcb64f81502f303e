#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"

namespace shaclup {

using json = nlohmann::json;

// Tagged-union JSON mirroring the AST. Shapes:
//   {"type":"top"} {"type":"bottom"} {"type":"shape","name":s}
//   {"type":"class","name":B} {"type":"node","name":c}
//   {"type":"and"|"or","args":[...]} {"type":"not","arg":x}
//   {"type":"at_least","n":k,"path":E[,"shape":x]} {"type":"exists","path":E[,"shape":x]}
//   {"type":"forall","path":E,"shape":x}
//   {"type":"equals"|"disjoint","path":E,"prop":p} {"type":"closed","props":[...]}
// Paths:
//   {"type":"prop"|"inverse","name":p} {"type":"pair","first":x,"second":y}
//   {"type":"singleton","first":a,"second":b} {"type":"seq"|"alt","args":[...]}
//   {"type":"star","arg":E} {"type":"diff","left":E,"right":E}
// Targets: a list (conjunction) of {"selector":x,"shape":s}, or a tree of
//   {"type":"and"|"or","args":[...]}, {"type":"not","arg":t}, {"type":"target",...}.
// Shapes graphs: {"constraints":[{"name":s,"body":x}],"targets":T} or
//   {"combine":C} where C is a graph object or {"type":"and"|"or","args":[C..]},
//   {"type":"not","arg":C}.
// Actions: a list of {"op":"add_class"|"del_class","class":B,"shape":x},
//   {"op":"add_prop"|"del_prop","prop":p,"path":E},
//   {"op":"cond","if":graph,"then":[...],"else":[...]}.
// Malformed input raises Error{Syntax}.

ShapePtr shape_from_json(const json& j);
PathPtr path_from_json(const json& j);
TargetPtr targets_from_json(const json& j);
ShapesGraphPtr shapes_graph_from_json(const json& j);
Action actions_from_json(const json& j);

json to_json(const ShapePtr& s);
json to_json(const PathPtr& p);
json to_json(const TargetPtr& t);
json to_json(const ShapesGraphPtr& g);
json to_json(const Action& a);

// Text entry points; parsed graphs and actions are checked for
// well-formedness (check_shapes_graph / check_action).
ShapesGraphPtr parse_shapes_graph(std::string_view text);
Action parse_actions(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace shaclup
