#pragma once

#include <string>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"
#include "shaclup/json_io.hpp"

#ifndef SHACLUP_TEST_DATA
#error "SHACLUP_TEST_DATA must point at tests/data"
#endif

namespace testing_support {

inline std::string data_path(const std::string& name) {
  return std::string(SHACLUP_TEST_DATA) + "/" + name;
}

inline shaclup::DataGraph hospital_graph() {
  return shaclup::parse_data_graph(shaclup::read_file(data_path("hospital.facts")));
}

inline shaclup::ShapesGraphPtr hospital_shapes() {
  return shaclup::parse_shapes_graph(shaclup::read_file(data_path("hospital_shapes.json")));
}

inline shaclup::Action load_action(const std::string& name) {
  return shaclup::parse_actions(shaclup::read_file(data_path(name)));
}

// G with every node of S and alpha declared, the standing assumption under
// which regression is compared with direct application.
shaclup::DataGraph with_all_nodes(const shaclup::DataGraph& g, const shaclup::ShapesGraphPtr& s,
                                  const shaclup::Action& a);

}  // namespace testing_support
