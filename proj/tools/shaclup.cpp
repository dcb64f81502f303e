#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "shaclup/bench.hpp"
#include "shaclup/bounded.hpp"
#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/fol.hpp"
#include "shaclup/json_io.hpp"
#include "shaclup/prover.hpp"
#include "shaclup/regression.hpp"
#include "shaclup/shapes_graph.hpp"
#include "shaclup/verifier.hpp"

using namespace shaclup;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFalse = 1, kUsage = 2, kBackend = 3 };

struct Config {
  std::string prover;
  double timeout_s = 60.0;
  std::vector<std::string> prover_args;
  std::vector<std::string> prover_finite_args;
  std::size_t max_domain = 3;
  std::uint64_t max_groundings = 10'000;
  std::uint64_t budget = 0;
  std::string engine = "sat";
  std::string route = "auto";
  bool json_output = false;
  std::string log_level = "warn";
  std::uint64_t seed = 0;
};

// Keys mirror the command-line flags; unknown keys are rejected.
void load_config(const std::string& path, Config& c) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Syntax, path + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "prover") c.prover = value.get<std::string>();
      else if (key == "timeout") c.timeout_s = value.get<double>();
      else if (key == "prover_args") c.prover_args = value.get<std::vector<std::string>>();
      else if (key == "prover_finite_args") c.prover_finite_args = value.get<std::vector<std::string>>();
      else if (key == "max_domain") c.max_domain = value.get<std::size_t>();
      else if (key == "max_groundings") c.max_groundings = value.get<std::uint64_t>();
      else if (key == "budget") c.budget = value.get<std::uint64_t>();
      else if (key == "engine") c.engine = value.get<std::string>();
      else if (key == "route") c.route = value.get<std::string>();
      else if (key == "output") c.json_output = value.get<std::string>() == "json";
      else if (key == "log_level") c.log_level = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw Error(ErrorKind::Syntax, path + ": unknown key '" + key + "'");
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Syntax, path + ": bad value for '" + key + "': " + e.what());
    }
  }
}

void check_config(const Config& c) {
  auto fail = [](const std::string& m) { throw CLI::ValidationError(m); };
  if (c.timeout_s <= 0) fail("--timeout must be positive");
  if (c.max_domain == 0) fail("--max-domain must be positive");
  if (c.max_groundings == 0) fail("--max-groundings must be positive");
  if (c.engine != "sat" && c.engine != "enumerate") fail("--engine must be sat or enumerate");
  if (c.route != "auto" && c.route != "regression" && c.route != "direct")
    fail("--route must be auto, regression or direct");
}

DataGraph load_graph(const std::string& path) {
  std::string text = read_file(path);
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".nt") == 0) return parse_ntriples(text);
  return parse_data_graph(text);
}

json facts_json(const DataGraph& g) {
  json lines = json::array();
  std::istringstream in(serialize_data_graph(g));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

VerifierOptions verifier_options(const Config& c) {
  VerifierOptions o;
  o.max_domain = c.max_domain;
  o.max_groundings = c.max_groundings;
  o.bounded.budget = c.budget;
  o.bounded.engine = c.engine == "enumerate" ? BoundedEngine::Enumerate : BoundedEngine::Sat;
  o.route = c.route == "direct"       ? QueryRoute::Direct
            : c.route == "regression" ? QueryRoute::Regression
                                      : QueryRoute::Auto;
  return o;
}

ProverConfig prover_config(const Config& c, bool finite) {
  ProverConfig p;
  p.path = c.prover;
  p.timeout_s = c.timeout_s;
  p.finite_models = finite;
  if (!c.prover_args.empty()) p.args = c.prover_args;
  if (!c.prover_finite_args.empty()) p.finite_args = c.prover_finite_args;
  return p;
}

json regression_stats(const RegressionStats& s) {
  return {{"substitutions", s.substitutions},
          {"tree_size_before", s.tree_size_before},
          {"tree_size_after", s.tree_size_after},
          {"dag_size_after", s.dag_size_after},
          {"growth", s.growth}};
}

json verdict_json(const Verdict& v) {
  if (const auto* np = std::get_if<NotPreserving>(&v)) {
    return {{"verdict", "not_preserving"},
            {"instance", to_json(np->instance)},
            {"grounding", np->grounding},
            {"witness", facts_json(np->witness)},
            {"heuristic", np->heuristic}};
  }
  if (const auto* nc = std::get_if<NoCounterexampleUpTo>(&v)) {
    return {{"verdict", "no_counterexample"},
            {"domain_bound", nc->domain_bound},
            {"groundings_checked", nc->groundings_checked},
            {"direct_queries", nc->direct_queries},
            {"heuristic", nc->heuristic}};
  }
  const auto& pa = std::get<ProverAnswer>(v);
  const char* status = pa.status == ProverStatus::Preserved      ? "preserved"
                       : pa.status == ProverStatus::NotPreserved ? "not_preserving"
                                                                 : "unknown";
  return {{"verdict", status}, {"backend", pa.backend}, {"szs", pa.szs}};
}

int verdict_exit(const Verdict& v) {
  if (std::holds_alternative<NotPreserving>(v)) return kFalse;
  if (std::holds_alternative<NoCounterexampleUpTo>(v)) return kOk;
  switch (std::get<ProverAnswer>(v).status) {
    case ProverStatus::Preserved: return kOk;
    case ProverStatus::NotPreserved: return kFalse;
    case ProverStatus::Unknown: return kBackend;
  }
  return kBackend;
}

int error_exit(ErrorKind k) {
  return k == ErrorKind::ProverUnavailable || k == ErrorKind::BudgetExceeded ? kBackend : kUsage;
}

std::vector<bench::CaseSpec> load_grid(const std::string& path, std::uint64_t seed,
                                       bench::SuiteOptions& options) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, path + ": " + e.what());
  }
  std::vector<bench::CaseSpec> grid;
  try {
    auto base = [&](const json& p) {
      bench::CaseSpec s;
      s.seed = p.value("seed", seed);
      if (p.contains("constant_pool_size")) s.constant_pool_size = p["constant_pool_size"].get<std::size_t>();
      s.num_classes = p.value("num_classes", s.num_classes);
      s.num_properties = p.value("num_properties", s.num_properties);
      return s;
    };
    if (j.contains("points")) {
      for (const auto& p : j["points"]) {
        bench::CaseSpec s = base(p);
        s.num_shapes = p.at("num_shapes").get<std::size_t>();
        s.num_actions = p.at("num_actions").get<std::size_t>();
        grid.push_back(s);
      }
    } else if (j.contains("shapes") || j.contains("actions")) {
      auto list = [&](const char* key) {
        std::vector<std::size_t> out;
        const json& v = j.at(key);
        if (v.is_number()) return std::vector<std::size_t>{v.get<std::size_t>()};
        if (v.is_array()) return v.get<std::vector<std::size_t>>();
        std::size_t step = v.value("step", std::size_t{1});
        if (step == 0) throw Error(ErrorKind::Syntax, path + ": step must be positive");
        for (auto x = v.at("from").get<std::size_t>(); x <= v.at("to").get<std::size_t>(); x += step)
          out.push_back(x);
        return out;
      };
      for (auto n : list("shapes"))
        for (auto a : list("actions")) {
          bench::CaseSpec s = base(j);
          s.num_shapes = n;
          s.num_actions = a;
          grid.push_back(s);
        }
    } else if (!j.empty()) {
      throw Error(ErrorKind::Syntax, path + ": expected \"points\" or \"shapes\"/\"actions\"");
    }
    options.repetitions = j.value("repetitions", options.repetitions);
    if (j.contains("backends")) options.backends = j["backends"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, path + ": " + e.what());
  }
  return grid;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("shaclup"));

  CLI::App app{"Static validation of SHACL shapes graphs under updates"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding the defaults")->check(CLI::ExistingFile);
  app.add_flag("--json", cfg.json_output, "print one JSON document {command, inputs, result}");
  app.add_option("--log-level", cfg.log_level, "trace, debug, info, warn, error or off");
  app.add_option("--seed", cfg.seed, "base seed for generated cases");

  std::string facts, shapes, actions, out_path, grid_path, csv_path;
  bool linear = false, want_explain = false, finite = false, sat_problem = false;
  std::optional<std::size_t> unroll;
  bench::CaseSpec gen_spec;

  auto* validate = app.add_subcommand("validate", "does the data graph validate the shapes graph");
  validate->add_option("facts", facts, "data graph (.facts or .nt)")->required()->check(CLI::ExistingFile);
  validate->add_option("shapes", shapes, "shapes graph JSON")->required()->check(CLI::ExistingFile);
  validate->add_flag("--explain", want_explain, "list violated targets");

  auto* apply_cmd = app.add_subcommand("apply", "apply a ground action to a data graph");
  apply_cmd->add_option("facts", facts)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("actions", actions, "actions JSON")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("-o,--output", out_path, "write the facts here instead of stdout");

  auto* regress_cmd = app.add_subcommand("regress", "rewrite a shapes graph backwards through an action");
  regress_cmd->add_option("shapes", shapes)->required()->check(CLI::ExistingFile);
  regress_cmd->add_option("actions", actions)->required()->check(CLI::ExistingFile);
  regress_cmd->add_flag("--linear", linear, "definitions with fresh names instead of nested substitution");

  auto* normalize_cmd = app.add_subcommand("normalize", "collapse a Boolean combination into one (C, T)");
  normalize_cmd->add_option("shapes", shapes)->required()->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "bounded search for an update that breaks validity");
  check->add_option("shapes", shapes)->required()->check(CLI::ExistingFile);
  check->add_option("actions", actions)->required()->check(CLI::ExistingFile);
  check->add_option("--max-domain", cfg.max_domain, "largest domain searched");
  check->add_option("--max-groundings", cfg.max_groundings, "grounding cap before the canonical fallback");
  check->add_option("--budget", cfg.budget, "solver conflicts (sat) or graphs (enumerate); 0 = default");
  check->add_option("--engine", cfg.engine, "sat or enumerate");
  check->add_option("--route", cfg.route, "auto, regression or direct");

  auto* check_fol = app.add_subcommand("check-fol", "preservation via an external first-order prover");
  check_fol->add_option("shapes", shapes)->required()->check(CLI::ExistingFile);
  check_fol->add_option("actions", actions)->required()->check(CLI::ExistingFile);
  check_fol->add_option("--prover", cfg.prover, "prover executable (default $SHACLUP_PROVER, then vampire)");
  check_fol->add_option("--timeout", cfg.timeout_s, "seconds per prover call");
  check_fol->add_flag("--finite-models", finite, "use the finite-model argument template");
  check_fol->add_option("--unroll", unroll, "unroll * to this many steps");
  check_fol->add_option("--max-groundings", cfg.max_groundings);

  auto* emit = app.add_subcommand("emit-tptp", "print the TPTP problem");
  emit->add_option("shapes", shapes)->required()->check(CLI::ExistingFile);
  emit->add_option("actions", actions, "ground action: emit the preservation problem")->check(CLI::ExistingFile);
  emit->add_option("--unroll", unroll);
  emit->add_flag("--sat", sat_problem, "without actions: satisfiability problem (the default)");

  auto* bench_cmd = app.add_subcommand("bench", "run a grid of generated cases");
  bench_cmd->add_option("--grid", grid_path, "grid JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--csv", csv_path, "write the CSV here (\"-\" or absent: stdout)");
  bench_cmd->add_option("--max-domain", cfg.max_domain);
  bench_cmd->add_option("--prover", cfg.prover);
  bench_cmd->add_option("--timeout", cfg.timeout_s);
  bench_cmd->add_option("--unroll", unroll);

  auto* gen = app.add_subcommand("gen", "print one generated case");
  gen->add_option("--shapes", gen_spec.num_shapes)->check(CLI::PositiveNumber);
  gen->add_option("--actions", gen_spec.num_actions);

  CLI::App* chosen = nullptr;
  json inputs = json::object();
  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      // Re-parse so flags given on the command line win over the file.
      Config from_file;
      load_config(config_path, from_file);
      cfg = from_file;
      app.parse(argc, argv);
    }
    check_config(cfg);
    chosen = app.get_subcommands().front();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run `" << app.get_name() << " --help` or `<subcommand> --help` for usage\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\nfix the --config file and retry\n";
    return kUsage;
  }
  spdlog::set_level(spdlog::level::from_str(cfg.log_level));

  const std::string command = chosen->get_name();
  for (const auto* opt : chosen->get_options())
    if (opt->count() > 0 && opt->get_name() != "--help") {
      auto results = opt->results();
      std::string key = opt->get_name();
      while (!key.empty() && key.front() == '-') key.erase(0, 1);
      inputs[key] = results.size() == 1 ? json(results[0]) : json(results);
    }

  std::string text;
  json result = json::object();
  int code = kOk;
  try {
    if (command == "validate") {
      DataGraph g = load_graph(facts);
      ShapesGraphPtr s = parse_shapes_graph(read_file(shapes));
      const bool ok = validates(g, s);
      code = ok ? kOk : kFalse;
      result["valid"] = ok;
      text = ok ? "valid\n" : "invalid\n";
      if (s->kind == GraphKind::Normal) {
        Assignment a = canonical_assignment(with_nodes_of(g, s), s->constraints);
        json atoms = json::array();
        for (const auto& [name, node] : a.shape_atoms) atoms.push_back(name + "(" + node.name() + ")");
        result["shape_atoms"] = atoms;
        if (want_explain || !ok) {
          json violations = json::array();
          for (const auto& v : shaclup::explain(g, s)) {
            json nodes = json::array();
            std::string line = "  " + v.target + ":";
            for (const auto& n : v.nodes) {
              nodes.push_back(n.name());
              line += " " + n.name();
            }
            violations.push_back({{"target", v.target}, {"nodes", nodes}});
            text += line + "\n";
          }
          result["violations"] = violations;
        }
      }
    } else if (command == "apply") {
      DataGraph g = apply(load_graph(facts), parse_actions(read_file(actions)));
      text = serialize_data_graph(g);
      result["facts"] = facts_json(g);
      if (!out_path.empty()) {
        write_text(out_path, text);
        text.clear();
      }
    } else if (command == "regress") {
      ShapesGraphPtr s = parse_shapes_graph(read_file(shapes));
      Action a = parse_actions(read_file(actions));
      if (linear) {
        LinearEncoding enc = regress_linear(s, a);
        json defs = json::array();
        text = to_string(enc.core) + "\n";
        for (const auto& d : enc.defs) {
          std::string body = d.on_class() ? to_string(d.class_body) : to_string(d.prop_body);
          defs.push_back({{"name", d.name},
                          {"base", d.base},
                          {"body", d.on_class() ? to_json(d.class_body) : to_json(d.prop_body)}});
          text += d.name + " := " + body + "\n";
        }
        result = {{"core", to_json(enc.core)}, {"definitions", defs}, {"size", enc.size()}};
      } else {
        RegressedGraph r = regress(s, a);
        text = to_string(r.result) + "\n";
        result = {{"shapes_graph", to_json(r.result)}, {"stats", regression_stats(r.stats)}};
      }
    } else if (command == "normalize") {
      ShapesGraphPtr n = normalize(parse_shapes_graph(read_file(shapes)));
      text = to_json(n).dump(2) + "\n";
      result["shapes_graph"] = to_json(n);
    } else if (command == "check") {
      Verdict v = is_preserving_bounded(parse_actions(read_file(actions)),
                                        parse_shapes_graph(read_file(shapes)), verifier_options(cfg));
      code = verdict_exit(v);
      text = to_string(v) + "\n";
      result = verdict_json(v);
    } else if (command == "check-fol") {
      FolCheckOptions o;
      o.prover = prover_config(cfg, finite);
      o.translate.unroll = unroll;
      o.max_groundings = cfg.max_groundings;
      Verdict v = check_preserving_fol(parse_shapes_graph(read_file(shapes)),
                                       parse_actions(read_file(actions)), o);
      code = verdict_exit(v);
      text = to_string(v) + "\n";
      result = verdict_json(v);
    } else if (command == "emit-tptp") {
      ShapesGraphPtr s = parse_shapes_graph(read_file(shapes));
      fol::TranslateOptions o;
      o.unroll = unroll;
      if (!actions.empty()) {
        Action a = parse_actions(read_file(actions));
        if (!is_ground(a))
          throw Error(ErrorKind::NonGroundAction,
                      "emit-tptp needs a ground action; replace the variables with nodes");
        text = preservation_problem(s, a, o);
      } else {
        text = fol::emit_tptp(fol::satisfiability_problem(fol::to_fol(s, {}, o)));
      }
      result["tptp"] = text;
    } else if (command == "bench") {
      bench::SuiteOptions o;
      o.bounded = verifier_options(cfg);
      o.fol.prover = prover_config(cfg, false);
      o.fol.translate.unroll = unroll;
      auto grid = load_grid(grid_path, cfg.seed, o);
      auto records = bench::run_suite(grid, o);
      std::string csv = bench::to_csv(records);
      auto summary = bench::summarize(records);
      if (!csv_path.empty() && csv_path != "-") {
        write_text(csv_path, csv);
        text = bench::summary_text(summary);
      } else {
        text = csv;
        std::cerr << bench::summary_text(summary);
      }
      json rows = json::array();
      for (const auto& r : records)
        rows.push_back({{"case_id", r.case_id}, {"seed", r.seed}, {"num_shapes", r.num_shapes},
                        {"num_actions", r.num_actions}, {"backend", r.backend},
                        {"verdict", r.verdict}, {"status", r.status}, {"wall_ms", r.wall_ms}});
      json points = json::array();
      for (const auto& p : summary)
        points.push_back({{"num_shapes", p.num_shapes}, {"num_actions", p.num_actions},
                          {"backend", p.backend}, {"runs", p.runs}, {"failed", p.failed},
                          {"mean_ms", p.mean_ms}, {"preserving", p.preserving}});
      result = {{"records", rows}, {"summary", points}};
    } else if (command == "gen") {
      gen_spec.seed = cfg.seed;
      auto c = bench::gen_case(gen_spec);
      text = bench::serialize_case(c);
      result = {{"id", c.id}, {"shapes", to_json(c.shapes)}, {"actions", to_json(c.action)}};
    }
  } catch (const Error& e) {
    code = error_exit(e.kind());
    if (cfg.json_output) {
      std::cout << json{{"command", command},
                        {"inputs", inputs},
                        {"result", {{"error", {{"kind", std::string(to_string(e.kind()))},
                                               {"message", e.what()}}}}}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    }
    return code;
  }

  if (cfg.json_output)
    std::cout << json{{"command", command}, {"inputs", inputs}, {"result", result}}.dump(2) << "\n";
  else
    std::cout << text;
  return code;
}
