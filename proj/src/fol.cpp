#include "shaclup/fol.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "shaclup/error.hpp"

namespace shaclup::fol {

namespace {

FormulaPtr make(Op op) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  return f;
}

FormulaPtr connective(Op op, std::vector<FormulaPtr> fs) {
  const Op unit = op == Op::And ? Op::True : Op::False;
  const Op zero = op == Op::And ? Op::False : Op::True;
  std::vector<FormulaPtr> kept;
  for (auto& f : fs) {
    if (f->op == zero) return make(zero);
    if (f->op == unit) continue;
    if (f->op == op)
      kept.insert(kept.end(), f->kids.begin(), f->kids.end());
    else
      kept.push_back(std::move(f));
  }
  if (kept.empty()) return make(unit);
  if (kept.size() == 1) return kept.front();
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->kids = std::move(kept);
  return f;
}

}  // namespace

FormulaPtr top() {
  static const FormulaPtr t = make(Op::True);
  return t;
}

FormulaPtr bottom() {
  static const FormulaPtr f = make(Op::False);
  return f;
}

FormulaPtr atom(std::string pred, std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Atom;
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}

FormulaPtr eq(Term a, Term b) {
  if (a == b) return top();
  auto f = std::make_shared<Formula>();
  f->op = Op::Equal;
  f->args = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr not_(FormulaPtr g) {
  if (g->op == Op::True) return bottom();
  if (g->op == Op::False) return top();
  if (g->op == Op::Not) return g->kids[0];
  auto f = std::make_shared<Formula>();
  f->op = Op::Not;
  f->kids = {std::move(g)};
  return f;
}

FormulaPtr and_(std::vector<FormulaPtr> fs) { return connective(Op::And, std::move(fs)); }
FormulaPtr or_(std::vector<FormulaPtr> fs) { return connective(Op::Or, std::move(fs)); }

FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  if (a->op == Op::True) return b;
  if (a->op == Op::False || b->op == Op::True) return top();
  auto f = std::make_shared<Formula>();
  f->op = Op::Implies;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Iff;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

namespace {

FormulaPtr quantifier(Op op, std::vector<std::string> vars, FormulaPtr body) {
  if (vars.empty() || body->op == Op::True || body->op == Op::False) return body;
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->vars = std::move(vars);
  f->kids = {std::move(body)};
  return f;
}

}  // namespace

FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body) {
  return quantifier(Op::Forall, std::move(vars), std::move(body));
}

FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body) {
  return quantifier(Op::Exists, std::move(vars), std::move(body));
}

FormulaPtr Sentence::formula() const {
  std::vector<FormulaPtr> parts = axioms;
  parts.push_back(claim ? claim : top());
  return and_(std::move(parts));
}

std::size_t size(const FormulaPtr& f) {
  std::size_t n = 1;
  for (const auto& k : f->kids) n += size(k);
  return n;
}

FormulaPtr rename_predicates(const FormulaPtr& f, const std::map<std::string, std::string>& m) {
  std::unordered_map<const Formula*, FormulaPtr> memo;
  auto go = [&](auto&& self, const FormulaPtr& g) -> FormulaPtr {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    FormulaPtr out = g;
    if (g->op == Op::Atom) {
      auto r = m.find(g->pred);
      if (r != m.end()) out = atom(r->second, g->args);
    } else if (!g->kids.empty()) {
      std::vector<FormulaPtr> kids;
      bool changed = false;
      for (const auto& k : g->kids) {
        kids.push_back(self(self, k));
        changed = changed || kids.back() != k;
      }
      if (changed) {
        auto copy = std::make_shared<Formula>(*g);
        copy->kids = std::move(kids);
        out = copy;
      }
    }
    memo.emplace(g.get(), out);
    return out;
  };
  return go(go, f);
}

namespace {

std::string shape_pred(const std::string& name) { return "@" + name; }

class Translator {
 public:
  Translator(Sentence& out, const TranslateOptions& options) : out_(out), options_(options) {}

  void declare(const std::string& name, int arity, PredKind kind) {
    auto it = out_.predicates.find(name);
    if (it != out_.predicates.end()) {
      if (it->second.arity != arity)
        throw Error(ErrorKind::NameSortClash,
                    "'" + name + "' is used both as a class and as a property");
      return;
    }
    out_.predicates.emplace(name, Predicate{name, arity, kind});
  }

  void declare_signature(const Signature& sig) {
    for (const auto& c : sig.classes) declare(c, 1, PredKind::Class);
    for (const auto& p : sig.properties) declare(p, 2, PredKind::Property);
    for (const auto& n : sig.constants) out_.constants.insert(n);
  }

  std::vector<std::string> data_properties() const {
    std::vector<std::string> out;
    for (const auto& [name, p] : out_.predicates)
      if (p.kind == PredKind::Property) out.push_back(name);
    return out;
  }

  std::string fresh_var() { return "X" + std::to_string(++vars_); }

  // `names` maps shape names to their predicates.
  FormulaPtr shape(const ShapePtr& s, const Term& t, const std::map<std::string, std::string>& names) {
    switch (s->kind) {
      case ShapeKind::Top:
        return top();
      case ShapeKind::Name: {
        auto it = names.find(s->name);
        if (it == names.end())
          throw Error(ErrorKind::UnboundShapeName, "no constraint for shape '" + s->name + "'");
        return atom(it->second, {t});
      }
      case ShapeKind::Class:
        declare(s->name, 1, PredKind::Class);
        return atom(s->name, {t});
      case ShapeKind::Node:
        if (is_variable(s->name))
          throw Error(ErrorKind::NonGroundAction, "variable " + s->name + " in a shape");
        out_.constants.insert(s->name);
        if (!t.variable) return t.name == s->name ? top() : bottom();
        return eq(t, constant(s->name));
      case ShapeKind::And:
        return and_({shape(s->lhs, t, names), shape(s->rhs, t, names)});
      case ShapeKind::Not:
        return not_(shape(s->lhs, t, names));
      case ShapeKind::AtLeast: {
        std::vector<std::string> ys;
        std::vector<FormulaPtr> parts;
        for (std::uint32_t i = 0; i < s->count; ++i) {
          ys.push_back(fresh_var());
          Term y = var(ys.back());
          parts.push_back(path(s->path, t, y, names));
          parts.push_back(shape(s->lhs, y, names));
        }
        for (std::size_t i = 0; i < ys.size(); ++i)
          for (std::size_t j = i + 1; j < ys.size(); ++j)
            parts.push_back(not_(eq(var(ys[i]), var(ys[j]))));
        return exists(ys, and_(std::move(parts)));
      }
      case ShapeKind::Equals:
      case ShapeKind::Disjoint: {
        declare(s->name, 2, PredKind::Property);
        std::string y = fresh_var();
        FormulaPtr e = path(s->path, t, var(y), names);
        FormulaPtr p = atom(s->name, {t, var(y)});
        return forall({y}, s->kind == ShapeKind::Equals ? iff(e, p) : not_(and_({e, p})));
      }
      case ShapeKind::Closed: {
        std::string y = fresh_var();
        std::vector<FormulaPtr> parts;
        for (const auto& q : data_properties())
          if (!std::binary_search(s->props.begin(), s->props.end(), q))
            parts.push_back(not_(atom(q, {t, var(y)})));
        return forall({y}, and_(std::move(parts)));
      }
    }
    return top();
  }

  FormulaPtr path(const PathPtr& p, const Term& a, const Term& b,
                  const std::map<std::string, std::string>& names) {
    switch (p->kind) {
      case PathKind::Prop:
        declare(p->name, 2, PredKind::Property);
        return atom(p->name, {a, b});
      case PathKind::Inverse:
        declare(p->name, 2, PredKind::Property);
        return atom(p->name, {b, a});
      case PathKind::Pair:
        return and_({shape(p->first, a, names), shape(p->second, b, names)});
      case PathKind::Seq: {
        std::string z = fresh_var();
        return exists({z}, and_({path(p->lhs, a, var(z), names), path(p->rhs, var(z), b, names)}));
      }
      case PathKind::Alt:
        return or_({path(p->lhs, a, b, names), path(p->rhs, a, b, names)});
      case PathKind::Diff:
        return and_({path(p->lhs, a, b, names), not_(path(p->rhs, a, b, names))});
      case PathKind::Star: {
        if (!options_.unroll)
          throw Error(ErrorKind::UnsupportedConstruct,
                      "transitive closure is not first-order; pass an unrolling bound");
        std::vector<FormulaPtr> lengths{eq(a, b)};
        for (std::size_t len = 1; len <= *options_.unroll; ++len) {
          std::vector<std::string> zs;
          std::vector<FormulaPtr> steps;
          Term from = a;
          for (std::size_t i = 0; i + 1 < len; ++i) {
            zs.push_back(fresh_var());
            steps.push_back(path(p->lhs, from, var(zs.back()), names));
            from = var(zs.back());
          }
          steps.push_back(path(p->lhs, from, b, names));
          lengths.push_back(exists(zs, and_(std::move(steps))));
        }
        return or_(std::move(lengths));
      }
    }
    return top();
  }

  FormulaPtr targets(const TargetPtr& t, const std::map<std::string, std::string>& names) {
    switch (t->kind) {
      case TargetKind::Atom: {
        auto it = names.find(t->shape);
        if (it == names.end())
          throw Error(ErrorKind::UnboundShapeName, "no constraint for shape '" + t->shape + "'");
        if (t->selector->kind == ShapeKind::Node && !is_variable(t->selector->name)) {
          out_.constants.insert(t->selector->name);
          return atom(it->second, {constant(t->selector->name)});
        }
        std::string x = fresh_var();
        return forall({x}, implies(shape(t->selector, var(x), names), atom(it->second, {var(x)})));
      }
      case TargetKind::Not:
        return not_(targets(t->args.at(0), names));
      case TargetKind::And:
      case TargetKind::Or: {
        std::vector<FormulaPtr> parts;
        for (const auto& a : t->args) parts.push_back(targets(a, names));
        return t->kind == TargetKind::And ? and_(std::move(parts)) : or_(std::move(parts));
      }
    }
    return top();
  }

  FormulaPtr graph(const ShapesGraphPtr& g, bool tag_operands) {
    switch (g->kind) {
      case GraphKind::Normal: {
        ++operand_;
        std::map<std::string, std::string> names;
        for (const auto& c : g->constraints) {
          std::string pred = shape_pred(c.name);
          if (tag_operands) pred += "~" + std::to_string(operand_);
          names[c.name] = pred;
          declare(pred, 1, PredKind::Shape);
        }
        for (const auto& c : g->constraints) {
          std::string x = fresh_var();
          out_.axioms.push_back(
              forall({x}, iff(atom(names[c.name], {var(x)}), shape(c.body, var(x), names))));
        }
        return targets(g->targets, names);
      }
      case GraphKind::Not:
        return not_(graph(g->args.at(0), tag_operands));
      case GraphKind::And:
      case GraphKind::Or: {
        std::vector<FormulaPtr> parts;
        for (const auto& a : g->args) parts.push_back(graph(a, tag_operands));
        return g->kind == GraphKind::And ? and_(std::move(parts)) : or_(std::move(parts));
      }
    }
    return top();
  }

 private:
  Sentence& out_;
  const TranslateOptions& options_;
  std::size_t vars_ = 0;
  std::size_t operand_ = 0;
};

std::size_t count_normal(const ShapesGraphPtr& g) {
  if (g->kind == GraphKind::Normal) return 1;
  std::size_t n = 0;
  for (const auto& a : g->args) n += count_normal(a);
  return n;
}

std::vector<FormulaPtr> distinctness(const std::set<std::string>& constants) {
  std::vector<FormulaPtr> out;
  std::vector<std::string> cs(constants.begin(), constants.end());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      out.push_back(not_(eq(constant(cs[i]), constant(cs[j]))));
  return out;
}

}  // namespace

Sentence to_fol(const ShapesGraphPtr& s, const Signature& extra, const TranslateOptions& options) {
  Sentence out;
  Translator tr(out, options);
  Signature sig = signature_of(s);
  sig.merge(extra);
  tr.declare_signature(sig);
  std::vector<FormulaPtr> definitions;
  out.claim = tr.graph(s, count_normal(s) > 1);
  definitions.swap(out.axioms);
  out.axioms = distinctness(out.constants);
  out.axioms.insert(out.axioms.end(), definitions.begin(), definitions.end());
  return out;
}

Sentence regress_fol(const Sentence& phi, const Action& a, const TranslateOptions& options) {
  for (const auto& step : a.steps)
    if (std::holds_alternative<Conditional>(step))
      throw Error(ErrorKind::UnsupportedAction,
                  "the first-order back-end handles sequences of basic actions only");
  auto vars = variables_of(a);
  if (!vars.empty())
    throw Error(ErrorKind::NonGroundAction, "cannot regress with free variable " + *vars.begin());

  Sentence out;
  out.predicates = phi.predicates;
  out.constants = phi.constants;
  Translator tr(out, options);
  tr.declare_signature(signature_of(graph::normal({}, nullptr), a));

  // Distinctness of constants introduced by the action.
  std::vector<FormulaPtr> axioms;
  {
    std::set<std::string> added;
    for (const auto& c : out.constants)
      if (!phi.constants.count(c)) added.insert(c);
    for (const auto& c : added)
      for (const auto& d : phi.constants) axioms.push_back(not_(eq(constant(c), constant(d))));
    for (auto& f : distinctness(added)) axioms.push_back(f);
  }

  auto fresh_pred = [&](const std::string& stem) {
    std::string name = stem;
    for (int i = 2; out.predicates.count(name); ++i) name = stem + "_" + std::to_string(i);
    return name;
  };

  std::map<std::string, std::string> current;
  const std::map<std::string, std::string> no_names;
  std::size_t k = 0;
  for (const auto& step : a.steps) {
    const auto& b = std::get<BasicAction>(step);
    ++k;
    auto cur = current.find(b.name);
    std::string base = cur == current.end() ? b.name : cur->second;
    std::string j = fresh_pred(b.name + "~" + std::to_string(k));
    std::string x = tr.fresh_var();
    FormulaPtr def;
    if (b.on_class()) {
      tr.declare(j, 1, PredKind::Fresh);
      FormulaPtr e = rename_predicates(tr.shape(b.shape, var(x), no_names), current);
      FormulaPtr old = atom(base, {var(x)});
      def = forall({x}, iff(atom(j, {var(x)}),
                            b.is_addition() ? or_({old, e}) : and_({old, not_(e)})));
    } else {
      std::string y = tr.fresh_var();
      tr.declare(j, 2, PredKind::Fresh);
      FormulaPtr e = rename_predicates(tr.path(b.path, var(x), var(y), no_names), current);
      FormulaPtr old = atom(base, {var(x), var(y)});
      def = forall({x, y}, iff(atom(j, {var(x), var(y)}),
                               b.is_addition() ? or_({old, e}) : and_({old, not_(e)})));
    }
    axioms.push_back(def);
    current[b.name] = j;
  }

  std::map<std::string, std::string> renaming = current;
  for (const auto& [name, p] : phi.predicates) {
    if (p.kind != PredKind::Shape) continue;
    std::string renamed = fresh_pred(name + "~r");
    out.predicates.emplace(renamed, Predicate{renamed, 1, PredKind::Shape});
    renaming[name] = renamed;
  }
  for (const auto& f : phi.axioms) axioms.push_back(rename_predicates(f, renaming));
  out.axioms = std::move(axioms);
  out.claim = rename_predicates(phi.claim ? phi.claim : top(), renaming);
  return out;
}

namespace {

void merge_into(TptpProblem& p, const Sentence& s) {
  for (const auto& [name, pred] : s.predicates) p.predicates.emplace(name, pred);
  p.constants.insert(s.constants.begin(), s.constants.end());
}

void push_unique(std::vector<FormulaPtr>& into, std::set<std::string>& seen, const FormulaPtr& f) {
  if (f->op == Op::True) return;
  if (seen.insert(to_string(f)).second) into.push_back(f);
}

}  // namespace

TptpProblem satisfiability_problem(const Sentence& s) {
  TptpProblem p;
  merge_into(p, s);
  std::set<std::string> seen;
  for (const auto& f : s.axioms) push_unique(p.axioms, seen, f);
  if (s.claim) push_unique(p.axioms, seen, s.claim);
  return p;
}

TptpProblem entailment_problem(const Sentence& premise, const Sentence& conclusion) {
  TptpProblem p;
  merge_into(p, premise);
  merge_into(p, conclusion);
  std::set<std::string> seen;
  for (const auto& f : premise.axioms) push_unique(p.axioms, seen, f);
  for (const auto& f : conclusion.axioms) push_unique(p.axioms, seen, f);
  if (premise.claim) push_unique(p.axioms, seen, premise.claim);
  p.conjecture = conclusion.claim ? conclusion.claim : top();
  return p;
}

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '@') continue;
    unsigned char u = static_cast<unsigned char>(c);
    out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
  }
  return out;
}

const char* prefix(PredKind k) {
  switch (k) {
    case PredKind::Class: return "c_";
    case PredKind::Property: return "r_";
    case PredKind::Shape: return "s_";
    case PredKind::Fresh: return "j_";
  }
  return "p_";
}

const char* kind_name(PredKind k) {
  switch (k) {
    case PredKind::Class: return "class";
    case PredKind::Property: return "property";
    case PredKind::Shape: return "shape";
    case PredKind::Fresh: return "fresh";
  }
  return "";
}

class Printer {
 public:
  explicit Printer(const TptpProblem& p) {
    std::set<std::string> used;
    auto assign = [&](const std::string& stem) {
      std::string name = stem;
      for (int i = 2; used.count(name); ++i) name = stem + "_" + std::to_string(i);
      used.insert(name);
      return name;
    };
    for (const auto& [name, pred] : p.predicates) preds_[name] = assign(prefix(pred.kind) + sanitize(name));
    for (const auto& c : p.constants) consts_[c] = assign("n_" + sanitize(c));
  }

  std::string pred(const std::string& name) {
    auto it = preds_.find(name);
    if (it != preds_.end()) return it->second;
    // Unregistered predicates only come from hand-built formulas.
    std::string fallback = "p_" + sanitize(name);
    preds_[name] = fallback;
    return fallback;
  }

  std::string term(const Term& t) {
    if (t.variable) return t.name;
    auto it = consts_.find(t.name);
    if (it != consts_.end()) return it->second;
    std::string fallback = "n_" + sanitize(t.name);
    consts_[t.name] = fallback;
    return fallback;
  }

  void print(std::ostream& os, const FormulaPtr& f) {
    switch (f->op) {
      case Op::True: os << "$true"; return;
      case Op::False: os << "$false"; return;
      case Op::Atom: {
        os << pred(f->pred);
        if (!f->args.empty()) {
          os << "(";
          for (std::size_t i = 0; i < f->args.size(); ++i) os << (i ? "," : "") << term(f->args[i]);
          os << ")";
        }
        return;
      }
      case Op::Equal:
        os << term(f->args[0]) << " = " << term(f->args[1]);
        return;
      case Op::Not:
        os << "~ (";
        print(os, f->kids[0]);
        os << ")";
        return;
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff: {
        const char* sym = f->op == Op::And ? " & " : f->op == Op::Or ? " | "
                          : f->op == Op::Implies ? " => " : " <=> ";
        os << "(";
        for (std::size_t i = 0; i < f->kids.size(); ++i) {
          if (i) os << sym;
          print(os, f->kids[i]);
        }
        os << ")";
        return;
      }
      case Op::Forall:
      case Op::Exists: {
        os << (f->op == Op::Forall ? "! [" : "? [");
        for (std::size_t i = 0; i < f->vars.size(); ++i) os << (i ? "," : "") << f->vars[i];
        os << "] : (";
        print(os, f->kids[0]);
        os << ")";
        return;
      }
    }
  }

  const std::map<std::string, std::string>& preds() const { return preds_; }
  const std::map<std::string, std::string>& consts() const { return consts_; }

 private:
  std::map<std::string, std::string> preds_;
  std::map<std::string, std::string> consts_;
};

}  // namespace

std::string emit_tptp(const TptpProblem& p) {
  Printer pr(p);
  std::ostringstream body;
  std::size_t n = 0;
  if (p.axioms.empty() && !p.conjecture)
    body << "fof(ax_" << n++ << ", axiom, ? [X] : (X = X)).\n";
  for (const auto& f : p.axioms) {
    body << "fof(ax_" << ++n << ", axiom, ";
    pr.print(body, f);
    body << ").\n";
  }
  if (p.conjecture) {
    body << "fof(goal, conjecture, ";
    pr.print(body, *p.conjecture);
    body << ").\n";
  }
  std::ostringstream os;
  for (const auto& [name, tptp] : pr.preds()) {
    auto it = p.predicates.find(name);
    os << "% " << tptp << " : " << name;
    if (it != p.predicates.end()) os << " (" << kind_name(it->second.kind) << ")";
    os << "\n";
  }
  for (const auto& [name, tptp] : pr.consts()) os << "% " << tptp << " : " << name << " (node)\n";
  os << body.str();
  return os.str();
}

std::string emit_tptp(const Sentence& s) { return emit_tptp(satisfiability_problem(s)); }

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: {
      os << f->pred << "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) os << (i ? "," : "") << f->args[i].name;
      os << ")";
      return os.str();
    }
    case Op::Equal:
      return f->args[0].name + " = " + f->args[1].name;
    case Op::Not:
      return "~" + to_string(f->kids[0]);
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: {
      const char* sym = f->op == Op::And ? " & " : f->op == Op::Or ? " | "
                        : f->op == Op::Implies ? " => " : " <=> ";
      os << "(";
      for (std::size_t i = 0; i < f->kids.size(); ++i) os << (i ? sym : "") << to_string(f->kids[i]);
      os << ")";
      return os.str();
    }
    case Op::Forall:
    case Op::Exists: {
      os << (f->op == Op::Forall ? "![" : "?[");
      for (std::size_t i = 0; i < f->vars.size(); ++i) os << (i ? "," : "") << f->vars[i];
      os << "]: " << to_string(f->kids[0]);
      return os.str();
    }
  }
  return "";
}

}  // namespace shaclup::fol
