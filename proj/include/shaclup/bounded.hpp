#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/graph.hpp"

namespace shaclup {

// Property added to the signature of expressions using closed(P): it stands for
// "some property outside every P", which a closedness violation may need.
inline const std::string kReservedProperty = "_other";

// Sorted, duplicate-free vocabulary over which bounded models are built.
struct Signature {
  std::vector<std::string> classes;
  std::vector<std::string> properties;
  std::vector<std::string> constants;

  void merge(const Signature& other);
};

Signature signature_of(const ShapesGraphPtr& s);
Signature signature_of(const ShapesGraphPtr& s, const Action& a);

// Domain of the given size: the constants followed by anonymous nodes
// _d1, _d2, ... (skipping names that are already constants).
std::vector<std::string> bounded_domain(const Signature& sig, std::size_t size);

// Every atom over the signature and domain, sorted by its facts-file text.
std::vector<Atom> atom_universe(const Signature& sig, const std::vector<std::string>& domain);

enum class BoundedEngine { Sat, Enumerate };

struct BoundedOptions {
  BoundedEngine engine = BoundedEngine::Sat;
  // Enumerate: graphs checked. Sat: solver conflicts. 0 selects the default.
  std::uint64_t budget = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1u << 22;
inline constexpr std::uint64_t kDefaultConflictBudget = 2'000'000;

struct BoundedStats {
  std::size_t domain_size = 0;      // size of the last domain searched
  std::uint64_t graphs_checked = 0;  // enumerator
  std::uint64_t solver_calls = 0;    // sat engine
  std::uint64_t conflicts = 0;       // sat engine
};

// First data graph G in canonical order with validates(G, S), or none. Domains
// run from max(1, #constants) to max(k, #constants) nodes; within one size,
// graphs are ordered by their atom set read as a bit vector over the sorted
// atom universe, first atom most significant. Every domain node is a node of
// the returned graph (some may be isolated). Throws BudgetExceeded.
std::optional<DataGraph> sat_bounded(const ShapesGraphPtr& s, const Signature& sig,
                                     std::size_t k, const BoundedOptions& options = {},
                                     BoundedStats* stats = nullptr);

// First G in the same order with validates(G, S) and not validates(apply(G, a), S)
// for a ground action a. No regression is involved: each step of a defines the
// next state's class and property extents from the current ones, so positions
// that regression cannot rewrite (E = p, disj(E, p), closed) are handled too.
std::optional<DataGraph> sat_bounded_update(const ShapesGraphPtr& s, const Action& ground_action,
                                            const Signature& sig, std::size_t k,
                                            const BoundedOptions& options = {},
                                            BoundedStats* stats = nullptr);

}  // namespace shaclup
