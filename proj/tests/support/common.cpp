#include "common.hpp"

#include "oracle.hpp"

namespace testing_support {

shaclup::DataGraph with_all_nodes(const shaclup::DataGraph& g, const shaclup::ShapesGraphPtr& s,
                                  const shaclup::Action& a) {
  oracle::Nodes nodes;
  oracle::collect_nodes(s, nodes);
  oracle::collect_nodes(a, nodes);
  shaclup::DataGraph out = g;
  for (const auto& n : nodes) out.add_node(shaclup::Node(n));
  return out;
}

}  // namespace testing_support
