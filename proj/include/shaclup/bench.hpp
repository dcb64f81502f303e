#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/prover.hpp"
#include "shaclup/verifier.hpp"

namespace shaclup::bench {

struct CaseSpec {
  std::size_t num_shapes = 4;
  std::size_t num_actions = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> constant_pool_size;  // default 2 * num_shapes
  std::size_t num_classes = 4;
  std::size_t num_properties = 4;

  std::size_t constants() const { return constant_pool_size.value_or(2 * num_shapes); }
};

struct GeneratedCase {
  std::string id;  // n<shapes>_a<actions>_s<seed>
  ShapesGraphPtr shapes;
  Action action;
};

// Pools: constants c1.., classes C1.., properties p1... Shape i (s1..) gets
// target kind i mod 4 (node, class, subjects of p, objects of p); its body is
// drawn uniformly from three templates:
//   equals/disjoint over two distinct properties;
//   qualified count over p with a {c} or class filler, min 1..2 or max 0..2;
//   path E (seq, alt or star, uniformly) with E.{c} existential or E.C universal.
// Actions are AddProp/DelProp whose argument is a pair of {c}/class fillers or
// a path. Same spec, same case.
GeneratedCase gen_case(const CaseSpec& spec);

// Canonical text of a case: shapes JSON and actions JSON, one per line.
std::string serialize_case(const GeneratedCase& c);

struct BenchRecord {
  std::string case_id;
  std::uint64_t seed = 0;
  std::size_t num_shapes = 0;
  std::size_t num_actions = 0;
  std::string backend;  // bounded | fol
  std::string verdict;  // not_preserving | no_counterexample | preserved | unknown | empty on error
  std::string status;   // ok, or the error kind
  double wall_ms = 0.0;
};

struct SuiteOptions {
  std::vector<std::string> backends{"bounded"};
  std::size_t repetitions = 1;  // seeds spec.seed, spec.seed + 1, ...
  VerifierOptions bounded;
  FolCheckOptions fol;
};

// One record per (case, backend), in grid order. Failures are recorded, never
// thrown (unknown backend names included).
std::vector<BenchRecord> run_suite(const std::vector<CaseSpec>& grid, const SuiteOptions& options);

inline constexpr const char* kCsvHeader =
    "case_id,seed,num_shapes,num_actions,backend,verdict,status,wall_ms";

std::string to_csv(const std::vector<BenchRecord>& records);

struct PointSummary {
  std::size_t num_shapes = 0;
  std::size_t num_actions = 0;
  std::string backend;
  std::size_t runs = 0;     // records with status ok
  std::size_t failed = 0;
  double mean_ms = 0.0;
  double preserving = 0.0;  // fraction of ok runs without a counterexample
};

// Per (grid point, backend), in first-seen order.
std::vector<PointSummary> summarize(const std::vector<BenchRecord>& records);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares; needs two distinct xs.
LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

struct ScalingReport {
  LinearFit linear;
  double lower_slope = 0.0;  // least-squares slope over the lower half of the xs
  double upper_slope = 0.0;  // ... and over the upper half
  bool superlinear = false;  // upper_slope > lower_slope
};

ScalingReport scaling(const std::vector<double>& xs, const std::vector<double>& ys);

std::string summary_text(const std::vector<PointSummary>& points);

}  // namespace shaclup::bench
