#include "folcheck.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

using namespace shaclup;
using namespace shaclup::fol;

namespace folcheck {

Structure from_graph(const DataGraph& g, const std::set<std::string>& constants) {
  Structure m;
  for (const auto& n : g.nodes()) m.domain.insert(n.name());
  m.domain.insert(constants.begin(), constants.end());
  for (const auto& a : g.atoms()) {
    if (const auto* c = std::get_if<ClassAtom>(&a))
      m.relations[c->cls].insert({c->node.name()});
    else {
      const auto& p = std::get<PropertyAtom>(a);
      m.relations[p.prop].insert({p.subject.name(), p.object.name()});
    }
  }
  return m;
}

namespace {

std::string value_of(const Term& t, const std::map<std::string, std::string>& env) {
  if (!t.variable) return t.name;
  auto it = env.find(t.name);
  if (it == env.end()) throw std::runtime_error("free variable " + t.name);
  return it->second;
}

bool quantify(const Structure& m, const Formula& f, std::size_t i,
              std::map<std::string, std::string>& env, bool universal) {
  if (i == f.vars.size()) return eval(m, f.kids[0], env);
  const std::string& v = f.vars[i];
  auto saved = env.find(v) != env.end() ? std::optional<std::string>(env[v]) : std::nullopt;
  bool result = universal;
  for (const auto& d : m.domain) {
    env[v] = d;
    bool r = quantify(m, f, i + 1, env, universal);
    if (universal && !r) {
      result = false;
      break;
    }
    if (!universal && r) {
      result = true;
      break;
    }
  }
  if (saved)
    env[v] = *saved;
  else
    env.erase(v);
  return result;
}

void predicates_in(const FormulaPtr& f, std::set<std::string>& out) {
  if (f->op == Op::Atom) out.insert(f->pred);
  for (const auto& k : f->kids) predicates_in(k, out);
}

}  // namespace

bool eval(const Structure& m, const FormulaPtr& f, std::map<std::string, std::string>& env) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: {
      std::vector<std::string> args;
      for (const auto& t : f->args) args.push_back(value_of(t, env));
      auto it = m.relations.find(f->pred);
      return it != m.relations.end() && it->second.count(args) > 0;
    }
    case Op::Equal: return value_of(f->args[0], env) == value_of(f->args[1], env);
    case Op::Not: return !eval(m, f->kids[0], env);
    case Op::And:
      for (const auto& k : f->kids)
        if (!eval(m, k, env)) return false;
      return true;
    case Op::Or:
      for (const auto& k : f->kids)
        if (eval(m, k, env)) return true;
      return false;
    case Op::Implies: return !eval(m, f->kids[0], env) || eval(m, f->kids[1], env);
    case Op::Iff: return eval(m, f->kids[0], env) == eval(m, f->kids[1], env);
    case Op::Forall: return quantify(m, *f, 0, env, true);
    case Op::Exists: return quantify(m, *f, 0, env, false);
  }
  return false;
}

std::optional<bool> evaluate(const Sentence& s, const DataGraph& g) {
  Structure m = from_graph(g, s.constants);
  struct Def {
    std::string pred;
    std::vector<std::string> vars;
    FormulaPtr body;
    std::set<std::string> uses;
  };
  std::vector<Def> defs;
  std::vector<FormulaPtr> facts;
  std::set<std::string> defined;
  for (const auto& a : s.axioms) {
    bool is_def = false;
    if (a->op == Op::Forall && a->kids[0]->op == Op::Iff && a->kids[0]->kids[0]->op == Op::Atom) {
      const auto& head = a->kids[0]->kids[0];
      auto p = s.predicates.find(head->pred);
      bool fresh_kind = p != s.predicates.end() &&
                        (p->second.kind == PredKind::Shape || p->second.kind == PredKind::Fresh);
      bool args_are_vars = head->args.size() == a->vars.size();
      for (std::size_t i = 0; args_are_vars && i < head->args.size(); ++i)
        args_are_vars = head->args[i].variable && head->args[i].name == a->vars[i];
      if (fresh_kind && args_are_vars && !defined.count(head->pred)) {
        Def d{head->pred, a->vars, a->kids[0]->kids[1], {}};
        predicates_in(d.body, d.uses);
        defs.push_back(std::move(d));
        defined.insert(head->pred);
        is_def = true;
      }
    }
    if (!is_def) facts.push_back(a);
  }
  std::set<std::string> pending = defined;
  while (!pending.empty()) {
    bool progress = false;
    for (const auto& d : defs) {
      if (!pending.count(d.pred)) continue;
      bool ready = true;
      for (const auto& u : d.uses) ready = ready && !pending.count(u);
      if (!ready) continue;
      auto& ext = m.relations[d.pred];
      std::vector<std::string> tuple(d.vars.size());
      std::map<std::string, std::string> env;
      std::function<void(std::size_t)> fill = [&](std::size_t i) {
        if (i == d.vars.size()) {
          if (eval(m, d.body, env)) ext.insert(tuple);
          return;
        }
        for (const auto& v : m.domain) {
          env[d.vars[i]] = v;
          tuple[i] = v;
          fill(i + 1);
        }
        env.erase(d.vars[i]);
      };
      fill(0);
      pending.erase(d.pred);
      progress = true;
    }
    if (!progress) throw std::runtime_error("cyclic definitions");
  }
  std::map<std::string, std::string> env;
  for (const auto& f : facts)
    if (!eval(m, f, env)) return std::nullopt;
  return eval(m, s.claim ? s.claim : top(), env);
}

namespace {

class TptpParser {
 public:
  explicit TptpParser(const std::string& text) : s_(text) {}

  std::string run() {
    try {
      skip();
      while (i_ < s_.size()) {
        annotated();
        skip();
      }
    } catch (const std::runtime_error& e) {
      return e.what();
    }
    return "";
  }

  std::size_t formulas = 0;

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error(what + " at offset " + std::to_string(i_));
  }

  void skip() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ < s_.size() && s_[i_] == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
        continue;
      }
      return;
    }
  }

  bool peek(const std::string& tok) {
    skip();
    return s_.compare(i_, tok.size(), tok) == 0;
  }

  void expect(const std::string& tok) {
    if (!peek(tok)) fail("expected '" + tok + "'");
    i_ += tok.size();
  }

  std::string word() {
    skip();
    std::size_t start = i_;
    if (i_ < s_.size() && s_[i_] == '$') ++i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) fail("expected a word");
    return s_.substr(start, i_ - start);
  }

  void annotated() {
    expect("fof");
    expect("(");
    std::string name = word();
    expect(",");
    std::string role = word();
    if (role != "axiom" && role != "conjecture" && role != "hypothesis")
      fail("unexpected role " + role);
    expect(",");
    bound_.clear();
    formula();
    expect(")");
    expect(".");
    ++formulas;
  }

  void formula() {
    unitary();
    std::string first_op;
    for (;;) {
      std::string op;
      for (const char* o : {"<=>", "=>", "<~>", "~|", "~&", "&", "|"})
        if (peek(o)) {
          op = o;
          break;
        }
      if (op.empty()) return;
      if (!first_op.empty() && (op != first_op || (op != "&" && op != "|")))
        fail("mixed or chained binary connectives need parentheses");
      first_op = op;
      i_ += op.size();
      unitary();
    }
  }

  void unitary() {
    if (peek("~")) {
      ++i_;
      unitary();
      return;
    }
    if (peek("!") && !peek("!=")) {
      ++i_;
      quantified();
      return;
    }
    if (peek("?")) {
      ++i_;
      quantified();
      return;
    }
    if (peek("(")) {
      ++i_;
      formula();
      expect(")");
      return;
    }
    atomic();
  }

  void quantified() {
    expect("[");
    std::vector<std::string> vars;
    do {
      std::string v = word();
      if (!std::isupper(static_cast<unsigned char>(v[0]))) fail("variable expected, got " + v);
      vars.push_back(v);
    } while (peek(",") && (++i_, true));
    expect("]");
    expect(":");
    for (const auto& v : vars) bound_.push_back(v);
    unitary();
    bound_.resize(bound_.size() - vars.size());
  }

  void term() {
    std::string w = word();
    if (std::isupper(static_cast<unsigned char>(w[0]))) {
      bool found = false;
      for (const auto& b : bound_) found = found || b == w;
      if (!found) fail("free variable " + w);
      return;
    }
    if (!std::islower(static_cast<unsigned char>(w[0]))) fail("bad term " + w);
  }

  void atomic() {
    skip();
    std::size_t save = i_;
    std::string w = word();
    if (w == "$true" || w == "$false") return;
    if (std::isupper(static_cast<unsigned char>(w[0]))) {
      i_ = save;
      term();
      if (peek("!=")) i_ += 2;
      else expect("=");
      term();
      return;
    }
    std::size_t arity = 0;
    if (peek("(")) {
      ++i_;
      do {
        term();
        ++arity;
      } while (peek(",") && (++i_, true));
      expect(")");
    }
    if (peek("=") && !peek("=>")) {
      if (arity != 0) fail("function terms are not used");
      ++i_;
      term();
      return;
    }
    if (peek("!=")) {
      i_ += 2;
      term();
      return;
    }
    auto [it, inserted] = arity_.emplace(w, arity);
    if (!inserted && it->second != arity) fail("predicate " + w + " used with two arities");
  }

  const std::string& s_;
  std::size_t i_ = 0;
  std::vector<std::string> bound_;
  std::map<std::string, std::size_t> arity_;
};

}  // namespace

std::string check_tptp(const std::string& text) { return TptpParser(text).run(); }

std::size_t count_formulas(const std::string& text) {
  TptpParser p(text);
  if (!p.run().empty()) return 0;
  return p.formulas;
}

}  // namespace folcheck
