#include "shaclup/verifier.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/regression.hpp"

namespace shaclup {

std::vector<std::string> GroundingSet::all() const {
  std::vector<std::string> out = base_nodes;
  out.insert(out.end(), fresh_nodes.begin(), fresh_nodes.end());
  return out;
}

GroundingSet grounding_set(const ShapesGraphPtr& s, const Action& a,
                           std::optional<std::size_t> fresh_count) {
  std::set<std::string> base = vocabulary_of(s).nodes;
  for (const auto& n : nodes_of(a)) base.insert(n);
  GroundingSet gamma;
  gamma.base_nodes.assign(base.begin(), base.end());
  std::size_t want = fresh_count.value_or(variables_of(a).size());
  for (std::size_t i = 1; gamma.fresh_nodes.size() < want; ++i) {
    std::string name = "_g" + std::to_string(i);
    if (!base.count(name)) gamma.fresh_nodes.push_back(name);
  }
  return gamma;
}

std::uint64_t grounding_count(const GroundingSet& gamma, std::size_t variables) {
  const std::uint64_t width = gamma.base_nodes.size() + gamma.fresh_nodes.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < variables; ++i) {
    if (width != 0 && total > UINT64_MAX / width) return UINT64_MAX;
    total *= width;
  }
  return total;
}

ShapesGraphPtr counterexample_query(const ShapesGraphPtr& s, const Action& ground_action) {
  return graph::and_(s, graph::not_(regress(s, ground_action).result));
}

namespace {

// Odometer over all maps from vars to values.
class GroundingIterator {
 public:
  GroundingIterator(std::vector<std::string> vars, std::vector<std::string> values)
      : vars_(std::move(vars)), values_(std::move(values)), digits_(vars_.size(), 0) {
    done_ = !vars_.empty() && values_.empty();
  }

  bool done() const { return done_; }

  Substitution current() const {
    Substitution sigma;
    for (std::size_t i = 0; i < vars_.size(); ++i) sigma[vars_[i]] = values_[digits_[i]];
    return sigma;
  }

  void next() {
    std::size_t i = vars_.size();
    while (i > 0) {
      --i;
      if (++digits_[i] < values_.size()) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<std::string> values_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

void recheck(const DataGraph& g, const ShapesGraphPtr& s, const Action& instance) {
  if (!validates(g, s) || validates(apply(g, instance), s))
    throw std::logic_error("bounded witness failed the direct re-check for " +
                           to_string(instance));
}

}  // namespace

GroundingPlan plan_groundings(const ShapesGraphPtr& s, const Action& a, std::uint64_t cap,
                              std::optional<std::size_t> fresh_nodes) {
  std::set<std::string> var_set = variables_of(a);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  GroundingSet gamma = grounding_set(s, a, fresh_nodes);
  GroundingPlan plan;
  plan.total = grounding_count(gamma, vars.size());
  if (plan.total > cap) {
    plan.heuristic = true;
    GroundingSet canonical = grounding_set(s, a, vars.size());
    Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i]] = canonical.fresh_nodes[i];
    plan.groundings.push_back(std::move(sigma));
    spdlog::warn("{} groundings exceed the cap of {}; checking the canonical fresh grounding only",
                 plan.total, cap);
    return plan;
  }
  for (GroundingIterator it(vars, gamma.all()); !it.done(); it.next())
    plan.groundings.push_back(it.current());
  return plan;
}

Verdict is_preserving_bounded(const Action& a, const ShapesGraphPtr& s,
                              const VerifierOptions& options) {
  GroundingPlan plan = plan_groundings(s, a, options.max_groundings, options.fresh_nodes);
  const bool ground_already = is_ground(a);
  std::uint64_t checked = 0, direct = 0;
  for (const auto& sigma : plan.groundings) {
    ++checked;
    Action instance = ground_already ? a : ground(a, sigma);
    const Signature sig = signature_of(s, instance);
    ShapesGraphPtr query;
    if (options.route != QueryRoute::Direct) {
      try {
        query = counterexample_query(s, instance);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsubstitutablePosition || options.route == QueryRoute::Regression)
          throw;
        spdlog::debug("regression unavailable ({}); encoding the update directly", e.what());
      }
    }
    std::optional<DataGraph> g;
    if (query) {
      g = sat_bounded(query, sig, options.max_domain, options.bounded);
    } else {
      ++direct;
      g = sat_bounded_update(s, instance, sig, options.max_domain, options.bounded);
    }
    if (!g) continue;
    recheck(*g, s, instance);
    return NotPreserving{std::move(*g), std::move(instance), sigma, plan.heuristic};
  }
  return NoCounterexampleUpTo{options.max_domain, checked, direct, plan.heuristic};
}

HardnessInstance hardness_reduction(const ShapesGraphPtr& s) {
  if (s->kind != GraphKind::Normal)
    throw Error(ErrorKind::InvalidShapesGraph,
                "the reduction takes a single (C, T) pair, not a Boolean combination");
  Vocabulary v = vocabulary_of(s);
  std::set<std::string> taken = v.classes;
  taken.insert(v.properties.begin(), v.properties.end());
  taken.insert(v.nodes.begin(), v.nodes.end());
  taken.insert(v.shape_names.begin(), v.shape_names.end());
  for (const auto& c : s->constraints) taken.insert(c.name);
  auto fresh = [&](const std::string& stem) {
    std::string name = stem;
    for (int i = 1; taken.count(name); ++i) name = stem + std::to_string(i);
    taken.insert(name);
    return name;
  };

  HardnessInstance out;
  out.cls = fresh("Hard");
  out.shape_name = fresh("hard");
  out.node = fresh("hard_c");
  std::vector<Constraint> constraints = s->constraints;
  constraints.push_back({out.shape_name, shape::not_(shape::cls(out.cls))});
  TargetPtr targets =
      target::all({s->targets, target::atom(shape::node(out.node), out.shape_name)});
  out.shapes = graph::normal(std::move(constraints), std::move(targets));
  out.action = action::add_class(out.cls, shape::node(out.node));
  return out;
}

std::string to_string(const Verdict& v) {
  std::ostringstream os;
  if (const auto* np = std::get_if<NotPreserving>(&v)) {
    os << "not preserving" << (np->heuristic ? " (canonical grounding)" : "")
       << "\ninstance: " << to_string(np->instance) << "\nwitness:\n"
       << serialize_data_graph(np->witness);
  } else if (const auto* nc = std::get_if<NoCounterexampleUpTo>(&v)) {
    os << "no counterexample up to " << nc->domain_bound << " nodes ("
       << nc->groundings_checked << " groundings checked"
       << (nc->heuristic ? ", canonical grounding only" : "") << ")";
  } else {
    const auto& pa = std::get<ProverAnswer>(v);
    switch (pa.status) {
      case ProverStatus::Preserved: os << "preserved"; break;
      case ProverStatus::NotPreserved: os << "not preserving"; break;
      case ProverStatus::Unknown: os << "unknown"; break;
    }
    os << " (" << pa.backend << (pa.szs.empty() ? "" : ", SZS " + pa.szs) << ")";
  }
  return os.str();
}

}  // namespace shaclup
