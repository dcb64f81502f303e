#include "shaclup/bounded.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "shaclup/error.hpp"
#include "shaclup/eval.hpp"
#include "shaclup/sat.hpp"

namespace shaclup {

namespace {

void merge_sorted(std::vector<std::string>& into, const std::vector<std::string>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

Signature from_vocabulary(const Vocabulary& v) {
  Signature sig;
  sig.classes.assign(v.classes.begin(), v.classes.end());
  sig.properties.assign(v.properties.begin(), v.properties.end());
  if (v.has_closed) merge_sorted(sig.properties, {kReservedProperty});
  sig.constants.assign(v.nodes.begin(), v.nodes.end());
  return sig;
}

}  // namespace

void Signature::merge(const Signature& other) {
  merge_sorted(classes, other.classes);
  merge_sorted(properties, other.properties);
  merge_sorted(constants, other.constants);
}

Signature signature_of(const ShapesGraphPtr& s) { return from_vocabulary(vocabulary_of(s)); }

Signature signature_of(const ShapesGraphPtr& s, const Action& a) {
  Vocabulary v = vocabulary_of(s);
  v.merge(vocabulary_of(a));
  return from_vocabulary(v);
}

std::vector<std::string> bounded_domain(const Signature& sig, std::size_t size) {
  std::vector<std::string> domain = sig.constants;
  for (std::size_t i = 1; domain.size() < size; ++i) {
    std::string name = "_d" + std::to_string(i);
    if (!std::binary_search(sig.constants.begin(), sig.constants.end(), name))
      domain.push_back(name);
  }
  return domain;
}

std::vector<Atom> atom_universe(const Signature& sig, const std::vector<std::string>& domain) {
  std::vector<std::pair<std::string, Atom>> keyed;
  for (const auto& c : sig.classes)
    for (const auto& v : domain) {
      Atom a = ClassAtom{c, Node(v)};
      keyed.emplace_back(to_string(a), a);
    }
  for (const auto& p : sig.properties)
    for (const auto& u : domain)
      for (const auto& w : domain) {
        Atom a = PropertyAtom{p, Node(u), Node(w)};
        keyed.emplace_back(to_string(a), a);
      }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Atom> out;
  out.reserve(keyed.size());
  for (auto& [key, atom] : keyed) out.push_back(std::move(atom));
  return out;
}

namespace {

using sat::Lit;
using Column = std::vector<Lit>;
using Matrix = std::vector<std::vector<Lit>>;

// Tseitin encoding of "G validates S" over a fixed domain, with one solver
// variable per atom of the universe.
class Encoder {
 public:
  Encoder(sat::Solver& solver, const Signature& sig, const std::vector<std::string>& domain,
          const std::vector<Atom>& universe)
      : solver_(solver), sig_(sig), domain_(domain), n_(domain.size()) {
    true_ = sat::pos(solver_.new_var());
    solver_.add_clause({true_});
    for (std::size_t i = 0; i < n_; ++i) index_[domain_[i]] = i;
    for (const auto& atom : universe) {
      Lit l = sat::pos(solver_.new_var());
      atom_lits.push_back(l);
      if (const auto* c = std::get_if<ClassAtom>(&atom)) {
        auto& col = classes_[c->cls];
        if (col.empty()) col.assign(n_, ~true_);
        col[index_.at(c->node.name())] = l;
      } else {
        const auto& p = std::get<PropertyAtom>(atom);
        auto& m = props_[p.prop];
        if (m.empty()) m.assign(n_, Column(n_, ~true_));
        m[index_.at(p.subject.name())][index_.at(p.object.name())] = l;
      }
    }
  }

  Lit graph(const ShapesGraphPtr& g) {
    switch (g->kind) {
      case GraphKind::Normal: {
        contexts_.emplace_back();
        Context* ctx = &contexts_.back();
        for (const auto& c : g->constraints) ctx->defs[c.name] = c.body;
        return targets(g->targets, ctx);
      }
      case GraphKind::Not:
        return ~graph(g->args.at(0));
      case GraphKind::And:
      case GraphKind::Or: {
        std::vector<Lit> parts;
        for (const auto& a : g->args) parts.push_back(graph(a));
        return g->kind == GraphKind::And ? and_n(parts) : or_n(parts);
      }
    }
    return true_;
  }

  // "apply(G, a) validates S" for the current state; the state is restored
  // afterwards. Conditionals branch as in the regression recursion.
  Lit after(const ShapesGraphPtr& s, const Action& a) { return after(s, a.steps, 0); }

  Lit and_gate(Lit a, Lit b) { return and2(a, b); }

  std::vector<Lit> atom_lits;

 private:
  Lit after(const ShapesGraphPtr& s, const std::vector<Step>& steps, std::size_t i) {
    forget();
    if (i == steps.size()) return graph(s);
    if (const auto* c = std::get_if<Conditional>(&steps[i])) {
      Lit cond = graph(c->condition);
      auto branch = [&](const Action& b) {
        std::vector<Step> rest = b.steps;
        rest.insert(rest.end(), steps.begin() + static_cast<std::ptrdiff_t>(i) + 1, steps.end());
        return after(s, rest, 0);
      };
      Lit t = branch(c->then_branch);
      Lit e = branch(c->else_branch);
      return or2(and2(cond, t), and2(~cond, e));
    }
    const auto& b = std::get<BasicAction>(steps[i]);
    auto saved_classes = classes_;
    auto saved_props = props_;
    Context none;
    if (b.on_class()) {
      Column arg = shape(b.shape, &none);
      Column cur = classes_.count(b.name) ? classes_[b.name] : Column(n_, ~true_);
      for (std::size_t v = 0; v < n_; ++v)
        cur[v] = b.is_addition() ? or2(cur[v], arg[v]) : and2(cur[v], ~arg[v]);
      classes_[b.name] = std::move(cur);
    } else {
      Matrix arg = path(b.path, &none);
      Matrix cur = prop_matrix(b.name);
      for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t w = 0; w < n_; ++w)
          cur[u][w] = b.is_addition() ? or2(cur[u][w], arg[u][w]) : and2(cur[u][w], ~arg[u][w]);
      props_[b.name] = std::move(cur);
    }
    Lit r = after(s, steps, i + 1);
    classes_ = std::move(saved_classes);
    props_ = std::move(saved_props);
    forget();
    return r;
  }

  // Memo entries describe the current state only.
  void forget() {
    shape_memo_.clear();
    path_memo_.clear();
  }

  struct Context {
    std::map<std::string, ShapePtr> defs;
  };

  bool is_true(Lit l) const { return l == true_; }
  bool is_false(Lit l) const { return l == ~true_; }

  Lit and2(Lit a, Lit b) {
    if (is_false(a) || is_false(b) || a == ~b) return ~true_;
    if (is_true(a) || a == b) return b;
    if (is_true(b)) return a;
    if (b < a) std::swap(a, b);
    auto key = std::make_pair(a.code, b.code);
    auto it = gates_.find(key);
    if (it != gates_.end()) return it->second;
    Lit g = sat::pos(solver_.new_var());
    solver_.add_clause({~g, a});
    solver_.add_clause({~g, b});
    solver_.add_clause({g, ~a, ~b});
    gates_.emplace(key, g);
    return g;
  }
  Lit or2(Lit a, Lit b) { return ~and2(~a, ~b); }
  Lit iff(Lit a, Lit b) { return and2(or2(~a, b), or2(a, ~b)); }

  Lit and_n(const std::vector<Lit>& xs) {
    std::vector<Lit> kept;
    for (Lit x : xs) {
      if (is_false(x)) return ~true_;
      if (!is_true(x)) kept.push_back(x);
    }
    if (kept.empty()) return true_;
    if (kept.size() == 1) return kept[0];
    if (kept.size() == 2) return and2(kept[0], kept[1]);
    Lit g = sat::pos(solver_.new_var());
    std::vector<Lit> back{g};
    for (Lit x : kept) {
      solver_.add_clause({~g, x});
      back.push_back(~x);
    }
    solver_.add_clause(back);
    return g;
  }
  Lit or_n(const std::vector<Lit>& xs) {
    std::vector<Lit> neg;
    neg.reserve(xs.size());
    for (Lit x : xs) neg.push_back(~x);
    return ~and_n(neg);
  }

  Lit at_least(std::uint32_t n, const std::vector<Lit>& xs) {
    if (n == 0) return true_;
    std::size_t live = std::count_if(xs.begin(), xs.end(), [&](Lit x) { return !is_false(x); });
    if (live < n) return ~true_;
    std::vector<Lit> c(n + 1, ~true_);
    c[0] = true_;
    for (Lit x : xs) {
      if (is_false(x)) continue;
      for (std::size_t j = n; j >= 1; --j) c[j] = or2(c[j], and2(c[j - 1], x));
    }
    return c[n];
  }

  bool has_name(const ShapePtr& s) {
    auto it = shape_named_.find(s.get());
    if (it != shape_named_.end()) return it->second;
    bool r = false;
    switch (s->kind) {
      case ShapeKind::Name: r = true; break;
      case ShapeKind::And: r = has_name(s->lhs) || has_name(s->rhs); break;
      case ShapeKind::Not: r = has_name(s->lhs); break;
      case ShapeKind::AtLeast: r = has_name(s->path) || has_name(s->lhs); break;
      case ShapeKind::Equals:
      case ShapeKind::Disjoint: r = has_name(s->path); break;
      default: break;
    }
    shape_named_[s.get()] = r;
    return r;
  }
  bool has_name(const PathPtr& p) {
    auto it = path_named_.find(p.get());
    if (it != path_named_.end()) return it->second;
    bool r = false;
    switch (p->kind) {
      case PathKind::Pair: r = has_name(p->first) || has_name(p->second); break;
      case PathKind::Seq:
      case PathKind::Alt:
      case PathKind::Diff: r = has_name(p->lhs) || has_name(p->rhs); break;
      case PathKind::Star: r = has_name(p->lhs); break;
      default: break;
    }
    path_named_[p.get()] = r;
    return r;
  }

  Lit targets(const TargetPtr& t, Context* ctx) {
    switch (t->kind) {
      case TargetKind::Atom: {
        const Column& sel = shape(t->selector, ctx);
        const Column& body = shape(shape::name(t->shape), ctx);
        std::vector<Lit> parts;
        for (std::size_t v = 0; v < n_; ++v) parts.push_back(or2(~sel[v], body[v]));
        return and_n(parts);
      }
      case TargetKind::Not:
        return ~targets(t->args.at(0), ctx);
      case TargetKind::And:
      case TargetKind::Or: {
        std::vector<Lit> parts;
        for (const auto& a : t->args) parts.push_back(targets(a, ctx));
        return t->kind == TargetKind::And ? and_n(parts) : or_n(parts);
      }
    }
    return true_;
  }

  const Column& shape(const ShapePtr& s, Context* ctx) {
    if (s->kind == ShapeKind::Name) {
      auto it = ctx->defs.find(s->name);
      if (it == ctx->defs.end())
        throw Error(ErrorKind::UnboundShapeName, "no constraint for shape '" + s->name + "'");
      return shape(it->second, ctx);
    }
    auto key = std::make_pair(has_name(s) ? static_cast<const void*>(ctx) : nullptr,
                              static_cast<const void*>(s.get()));
    auto found = shape_memo_.find(key);
    if (found != shape_memo_.end()) return found->second;
    Column col(n_, ~true_);
    switch (s->kind) {
      case ShapeKind::Top:
        col.assign(n_, true_);
        break;
      case ShapeKind::Class: {
        auto it = classes_.find(s->name);
        if (it != classes_.end()) col = it->second;
        break;
      }
      case ShapeKind::Node: {
        if (is_variable(s->name))
          throw Error(ErrorKind::NonGroundAction, "variable " + s->name + " in a shape");
        auto it = index_.find(s->name);
        if (it != index_.end()) col[it->second] = true_;
        break;
      }
      case ShapeKind::And: {
        const Column& a = shape(s->lhs, ctx);
        const Column& b = shape(s->rhs, ctx);
        for (std::size_t v = 0; v < n_; ++v) col[v] = and2(a[v], b[v]);
        break;
      }
      case ShapeKind::Not: {
        const Column& a = shape(s->lhs, ctx);
        for (std::size_t v = 0; v < n_; ++v) col[v] = ~a[v];
        break;
      }
      case ShapeKind::AtLeast: {
        const Matrix& r = path(s->path, ctx);
        const Column& f = shape(s->lhs, ctx);
        for (std::size_t v = 0; v < n_; ++v) {
          std::vector<Lit> succ;
          for (std::size_t w = 0; w < n_; ++w) succ.push_back(and2(r[v][w], f[w]));
          col[v] = at_least(s->count, succ);
        }
        break;
      }
      case ShapeKind::Equals:
      case ShapeKind::Disjoint: {
        const Matrix& r = path(s->path, ctx);
        const Matrix& p = prop_matrix(s->name);
        for (std::size_t v = 0; v < n_; ++v) {
          std::vector<Lit> parts;
          for (std::size_t w = 0; w < n_; ++w)
            parts.push_back(s->kind == ShapeKind::Equals ? iff(r[v][w], p[v][w])
                                                         : ~and2(r[v][w], p[v][w]));
          col[v] = and_n(parts);
        }
        break;
      }
      case ShapeKind::Closed: {
        for (std::size_t v = 0; v < n_; ++v) {
          std::vector<Lit> parts;
          for (const auto& q : sig_.properties) {
            if (std::binary_search(s->props.begin(), s->props.end(), q)) continue;
            const Matrix& m = prop_matrix(q);
            for (std::size_t w = 0; w < n_; ++w) parts.push_back(~m[v][w]);
          }
          col[v] = and_n(parts);
        }
        break;
      }
      case ShapeKind::Name:
        break;
    }
    return shape_memo_.emplace(key, std::move(col)).first->second;
  }

  const Matrix& prop_matrix(const std::string& p) {
    auto it = props_.find(p);
    if (it != props_.end()) return it->second;
    return props_.emplace(p, Matrix(n_, Column(n_, ~true_))).first->second;
  }

  const Matrix& path(const PathPtr& p, Context* ctx) {
    auto key = std::make_pair(has_name(p) ? static_cast<const void*>(ctx) : nullptr,
                              static_cast<const void*>(p.get()));
    auto found = path_memo_.find(key);
    if (found != path_memo_.end()) return found->second;
    Matrix m(n_, Column(n_, ~true_));
    switch (p->kind) {
      case PathKind::Prop:
        m = prop_matrix(p->name);
        break;
      case PathKind::Inverse: {
        const Matrix& r = prop_matrix(p->name);
        for (std::size_t u = 0; u < n_; ++u)
          for (std::size_t w = 0; w < n_; ++w) m[u][w] = r[w][u];
        break;
      }
      case PathKind::Pair: {
        const Column& a = shape(p->first, ctx);
        const Column& b = shape(p->second, ctx);
        for (std::size_t u = 0; u < n_; ++u)
          for (std::size_t w = 0; w < n_; ++w) m[u][w] = and2(a[u], b[w]);
        break;
      }
      case PathKind::Seq: {
        const Matrix& a = path(p->lhs, ctx);
        const Matrix& b = path(p->rhs, ctx);
        m = compose(a, b);
        break;
      }
      case PathKind::Alt:
      case PathKind::Diff: {
        const Matrix& a = path(p->lhs, ctx);
        const Matrix& b = path(p->rhs, ctx);
        for (std::size_t u = 0; u < n_; ++u)
          for (std::size_t w = 0; w < n_; ++w)
            m[u][w] = p->kind == PathKind::Alt ? or2(a[u][w], b[u][w]) : and2(a[u][w], ~b[u][w]);
        break;
      }
      case PathKind::Star: {
        const Matrix& r = path(p->lhs, ctx);
        for (std::size_t u = 0; u < n_; ++u)
          for (std::size_t w = 0; w < n_; ++w) m[u][w] = u == w ? true_ : r[u][w];
        // Reflexive closure squared until it covers paths of length n-1.
        for (std::size_t reach = 1; reach + 1 < n_; reach *= 2) m = compose(m, m);
        break;
      }
    }
    return path_memo_.emplace(key, std::move(m)).first->second;
  }

  Matrix compose(const Matrix& a, const Matrix& b) {
    Matrix m(n_, Column(n_, ~true_));
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t w = 0; w < n_; ++w) {
        std::vector<Lit> via;
        for (std::size_t z = 0; z < n_; ++z) via.push_back(and2(a[u][z], b[z][w]));
        m[u][w] = or_n(via);
      }
    return m;
  }

  sat::Solver& solver_;
  const Signature& sig_;
  const std::vector<std::string>& domain_;
  std::size_t n_;
  Lit true_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Column> classes_;
  std::map<std::string, Matrix> props_;
  std::deque<Context> contexts_;
  std::map<std::pair<int, int>, Lit> gates_;
  std::unordered_map<const Shape*, bool> shape_named_;
  std::unordered_map<const Path*, bool> path_named_;
  std::map<std::pair<const void*, const void*>, Column> shape_memo_;
  std::map<std::pair<const void*, const void*>, Matrix> path_memo_;
};

DataGraph graph_from_bits(const std::vector<std::string>& domain,
                          const std::vector<Atom>& universe, const std::vector<bool>& bits) {
  DataGraph g;
  for (const auto& v : domain) g.add_node(Node(v));
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (bits[i]) g.add(universe[i]);
  return g;
}

[[noreturn]] void budget_exceeded(const std::string& what, std::uint64_t spent) {
  throw Error(ErrorKind::BudgetExceeded,
              "bounded search gave up after " + std::to_string(spent) + " " + what);
}

using Query = std::function<Lit(Encoder&)>;
using Check = std::function<bool(const DataGraph&)>;

std::optional<DataGraph> first_model_sat(const Query& query, const Signature& sig,
                                         const std::vector<std::string>& domain,
                                         std::uint64_t budget, BoundedStats& stats) {
  std::vector<Atom> universe = atom_universe(sig, domain);
  sat::Solver solver;
  Encoder enc(solver, sig, domain, universe);
  solver.add_clause({query(enc)});

  auto run = [&](const std::vector<Lit>& assumptions) {
    std::uint64_t spent = solver.stats().conflicts;
    if (spent >= budget) budget_exceeded("conflicts", stats.conflicts + spent);
    ++stats.solver_calls;
    sat::Result r = solver.solve(assumptions, budget - spent);
    if (r == sat::Result::Unknown) budget_exceeded("conflicts", stats.conflicts + budget);
    return r == sat::Result::Sat;
  };

  bool found = run({});
  if (found) {
    // Fix atoms in universe order, preferring absence: the result is the
    // least model in the canonical bit-vector order.
    std::vector<bool> bits(universe.size());
    auto take_model = [&] {
      for (std::size_t i = 0; i < universe.size(); ++i)
        bits[i] = solver.model_value(enc.atom_lits[i]);
    };
    take_model();
    std::vector<Lit> fixed;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      Lit a = enc.atom_lits[i];
      if (bits[i]) {
        fixed.push_back(~a);
        if (run(fixed)) {
          take_model();
        } else {
          fixed.back() = a;
        }
      } else {
        fixed.push_back(~a);
      }
    }
    stats.conflicts += solver.stats().conflicts;
    return graph_from_bits(domain, universe, bits);
  }
  stats.conflicts += solver.stats().conflicts;
  return std::nullopt;
}

std::optional<DataGraph> first_model_enumerate(const Check& check, const Signature& sig,
                                               const std::vector<std::string>& domain,
                                               std::uint64_t budget, BoundedStats& stats) {
  std::vector<Atom> universe = atom_universe(sig, domain);
  const std::size_t n = universe.size();
  std::vector<bool> bits(n, false);
  for (;;) {
    if (stats.graphs_checked >= budget) budget_exceeded("graphs", stats.graphs_checked);
    ++stats.graphs_checked;
    DataGraph g = graph_from_bits(domain, universe, bits);
    if (check(g)) return g;
    // Next bit vector, last atom least significant.
    std::size_t i = n;
    while (i > 0 && bits[i - 1]) bits[--i] = false;
    if (i == 0) return std::nullopt;
    bits[i - 1] = true;
  }
}

std::optional<DataGraph> search(const Query& query, const Check& check, const Signature& full,
                                std::size_t k, const BoundedOptions& options, BoundedStats& st) {
  const std::size_t lo = std::max<std::size_t>(1, full.constants.size());
  const std::size_t hi = std::max(k, full.constants.size());
  std::uint64_t budget = options.budget;
  if (budget == 0)
    budget = options.engine == BoundedEngine::Sat ? kDefaultConflictBudget
                                                  : kDefaultEnumerationBudget;
  for (std::size_t size = lo; size <= hi; ++size) {
    st.domain_size = size;
    std::vector<std::string> domain = bounded_domain(full, size);
    std::optional<DataGraph> g;
    if (options.engine == BoundedEngine::Sat) {
      std::uint64_t left = budget > st.conflicts ? budget - st.conflicts : 0;
      if (left == 0) budget_exceeded("conflicts", st.conflicts);
      g = first_model_sat(query, full, domain, left, st);
    } else {
      g = first_model_enumerate(check, full, domain, budget, st);
    }
    if (g) return g;
  }
  return std::nullopt;
}

}  // namespace

std::optional<DataGraph> sat_bounded(const ShapesGraphPtr& s, const Signature& sig,
                                     std::size_t k, const BoundedOptions& options,
                                     BoundedStats* stats) {
  BoundedStats local;
  Signature full = sig;
  full.merge(signature_of(s));
  return search([&](Encoder& enc) { return enc.graph(s); },
                [&](const DataGraph& g) { return validates(g, s); }, full, k, options,
                stats ? *stats : local);
}

std::optional<DataGraph> sat_bounded_update(const ShapesGraphPtr& s, const Action& ground_action,
                                            const Signature& sig, std::size_t k,
                                            const BoundedOptions& options, BoundedStats* stats) {
  if (!is_ground(ground_action))
    throw Error(ErrorKind::NonGroundAction, "the update query needs a ground action");
  check_action(ground_action);
  BoundedStats local;
  Signature full = sig;
  full.merge(signature_of(s, ground_action));
  return search(
      [&](Encoder& enc) {
        Lit before = enc.graph(s);
        return enc.and_gate(before, ~enc.after(s, ground_action));
      },
      [&](const DataGraph& g) { return validates(g, s) && !validates(apply(g, ground_action), s); },
      full, k, options, stats ? *stats : local);
}

}  // namespace shaclup
