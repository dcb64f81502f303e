#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/fol.hpp"
#include "shaclup/verifier.hpp"

namespace shaclup {

inline const char* const kProverEnv = "SHACLUP_PROVER";

// External prover contract: an executable taking a TPTP file and printing an
// SZS status line. In the argument templates, {file} is replaced by the
// problem path and {timeout} by the timeout in whole seconds.
struct ProverConfig {
  std::string path;  // empty: $SHACLUP_PROVER, then `vampire` on PATH
  double timeout_s = 60.0;
  bool finite_models = false;
  std::vector<std::string> args{"--mode", "casc", "-t", "{timeout}", "{file}"};
  std::vector<std::string> finite_args{"--mode", "casc_sat", "-t", "{timeout}", "{file}"};
};

struct ProverRun {
  std::string szs;  // status word, e.g. Theorem, CounterSatisfiable; empty if none
  bool timed_out = false;
  int exit_code = 0;
  double wall_ms = 0.0;
  std::string output;
};

// Executable path, or nullopt when nothing usable is configured or installed.
std::optional<std::string> resolve_prover(const ProverConfig& config);

// Runs the prover on the problem text under a hard timeout (the process group
// is killed when it overruns). Throws ProverUnavailable.
ProverRun run_prover(const ProverConfig& config, const std::string& problem);

// Last "SZS status <Word>" in the output.
std::string parse_szs(const std::string& output);

struct FolCheckOptions {
  ProverConfig prover;
  fol::TranslateOptions translate;
  std::uint64_t max_groundings = 10'000;
  std::optional<std::size_t> fresh_nodes;
};

// For each grounding (as in is_preserving_bounded, with the same cap and
// fallback), asks whether to_fol(S) entails regress_fol(to_fol(S), alpha*).
// Theorem for all groundings: preserved. CounterSatisfiable for one: not
// preserving. Anything else, including timeouts: unknown.
ProverAnswer check_preserving_fol(const ShapesGraphPtr& s, const Action& a,
                                  const FolCheckOptions& options = {});

// TPTP text of the entailment problem for one ground instance.
std::string preservation_problem(const ShapesGraphPtr& s, const Action& ground_action,
                                 const fol::TranslateOptions& options = {});

}  // namespace shaclup
