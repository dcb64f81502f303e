#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/bounded.hpp"
#include "shaclup/graph.hpp"

namespace shaclup {

struct GroundingSet {
  std::vector<std::string> base_nodes;   // nodes of S and alpha, sorted
  std::vector<std::string> fresh_nodes;  // _g1.._gn

  std::vector<std::string> all() const;
};

// fresh_count defaults to the number of variables of alpha.
GroundingSet grounding_set(const ShapesGraphPtr& s, const Action& a,
                           std::optional<std::size_t> fresh_count = std::nullopt);

struct NotPreserving {
  DataGraph witness;
  Action instance;
  Substitution grounding;
  bool heuristic = false;  // found under the canonical fresh grounding only
};

struct NoCounterexampleUpTo {
  std::size_t domain_bound = 0;
  std::uint64_t groundings_checked = 0;
  std::uint64_t direct_queries = 0;  // groundings searched without regression
  bool heuristic = false;  // grounding cap hit; only the canonical grounding was tried
};

enum class ProverStatus { Preserved, NotPreserved, Unknown };

struct ProverAnswer {
  ProverStatus status = ProverStatus::Unknown;
  std::string backend;
  std::string szs;  // raw SZS status word, empty if none was printed
};

using Verdict = std::variant<NotPreserving, NoCounterexampleUpTo, ProverAnswer>;

// Regression: search S and not tr_a*(S). Direct: encode the update itself
// (sat_bounded_update). Auto: regression, falling back to Direct for a
// grounding whose regression raises UnsubstitutablePosition.
enum class QueryRoute { Auto, Regression, Direct };

struct VerifierOptions {
  std::size_t max_domain = 3;
  std::uint64_t max_groundings = 10'000;
  std::optional<std::size_t> fresh_nodes;
  BoundedOptions bounded;
  QueryRoute route = QueryRoute::Auto;
};

// Every grounding of alpha over the grounding set, in lexicographic order
// (variables sorted, values in grounding-set order). Past max_groundings, the
// canonical grounding mapping the i-th variable to the i-th fresh node is used
// instead and the verdict is marked heuristic. A witness is re-checked against
// the direct semantics before it is returned.
Verdict is_preserving_bounded(const Action& a, const ShapesGraphPtr& s,
                              const VerifierOptions& options = {});

// Counterexample query for one ground instance: S and not tr_alpha(S).
ShapesGraphPtr counterexample_query(const ShapesGraphPtr& s, const Action& ground_action);

// Number of groundings |Gamma|^n, saturating.
std::uint64_t grounding_count(const GroundingSet& gamma, std::size_t variables);

struct GroundingPlan {
  std::vector<Substitution> groundings;  // one empty map for a ground action
  bool heuristic = false;                // cap exceeded: canonical grounding only
  std::uint64_t total = 0;               // |Gamma|^n
};

// All groundings over the grounding set in lexicographic order (variables
// sorted, values in grounding-set order), or past `cap` just the canonical one
// mapping the i-th variable to the i-th fresh node.
GroundingPlan plan_groundings(const ShapesGraphPtr& s, const Action& a, std::uint64_t cap,
                              std::optional<std::size_t> fresh_nodes = std::nullopt);

struct HardnessInstance {
  ShapesGraphPtr shapes;  // (C + {s <-> !B}, T and (c, s))
  BasicAction action;     // AddClass(B, {c})
  std::string cls, shape_name, node;
};

// For a plain-SHACL S: S is satisfiable iff the action is not preserving for
// the returned shapes graph. Names are fresh for S.
HardnessInstance hardness_reduction(const ShapesGraphPtr& s);

std::string to_string(const Verdict& v);

}  // namespace shaclup
