#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shaclup/actions.hpp"
#include "shaclup/ast.hpp"
#include "shaclup/bounded.hpp"

namespace shaclup::fol {

struct Term {
  std::string name;
  bool variable = false;

  friend bool operator==(const Term&, const Term&) = default;
};

inline Term var(std::string n) { return Term{std::move(n), true}; }
inline Term constant(std::string n) { return Term{std::move(n), false}; }

enum class Op { True, False, Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::True;
  std::string pred;               // Atom
  std::vector<Term> args;         // Atom, Equal
  std::vector<FormulaPtr> kids;   // connectives; quantifier body in kids[0]
  std::vector<std::string> vars;  // Forall, Exists
};

FormulaPtr top();
FormulaPtr bottom();
FormulaPtr atom(std::string pred, std::vector<Term> args);
FormulaPtr eq(Term a, Term b);
FormulaPtr not_(FormulaPtr f);
FormulaPtr and_(std::vector<FormulaPtr> fs);  // flattens, drops $true
FormulaPtr or_(std::vector<FormulaPtr> fs);   // flattens, drops $false
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body);

enum class PredKind { Class, Property, Shape, Fresh };

struct Predicate {
  std::string name;
  int arity = 1;
  PredKind kind = PredKind::Class;
};

// A closed sentence: the conjunction of `axioms` and `claim`. Axioms hold the
// definitions of shape and fresh predicates (forall xs. P(xs) <-> body, each
// body mentioning only earlier-defined or data predicates) and the
// distinctness of constants; `claim` holds the Boolean target structure.
struct Sentence {
  std::map<std::string, Predicate> predicates;
  std::set<std::string> constants;
  std::vector<FormulaPtr> axioms;
  FormulaPtr claim;

  FormulaPtr formula() const;
};

struct TranslateOptions {
  // Paths E* become x = y or E(x,y) or ... up to this many steps. Without it,
  // star is rejected.
  std::optional<std::size_t> unroll;
};

// Shapes graph to FOL. `extra` widens the signature (closedness ranges over
// every property of the signature, so pass the action's vocabulary when the
// sentence will be regressed).
Sentence to_fol(const ShapesGraphPtr& s, const Signature& extra = {},
                const TranslateOptions& options = {});

// Left to right over the ground basic actions: each action on relation r gets
// a fresh j with the definition j <-> r_cur | e or r_cur & !e, where r_cur is
// the name current before the action; the input sentence then has every r
// renamed to its last j. Shape predicates of the input are renamed apart so
// the result can sit next to the original. Throws UnsupportedAction for
// conditionals and NonGroundAction for variables.
Sentence regress_fol(const Sentence& phi, const Action& a, const TranslateOptions& options = {});

// Predicate renaming, memoized on shared subformulas.
FormulaPtr rename_predicates(const FormulaPtr& f, const std::map<std::string, std::string>& m);

enum class JobKind {
  Satisfiability,  // every formula is an axiom
  Entailment,      // axioms plus `goal` as the conjecture
};

struct TptpProblem {
  std::vector<FormulaPtr> axioms;
  std::optional<FormulaPtr> conjecture;
  std::map<std::string, Predicate> predicates;
  std::set<std::string> constants;
};

TptpProblem satisfiability_problem(const Sentence& s);

// Axioms of both sentences and the claim of `premise`; conjecture: claim of
// `conclusion`.
TptpProblem entailment_problem(const Sentence& premise, const Sentence& conclusion);

// Deterministic fof text: a comment block mapping TPTP names back, a
// domain-nonemptiness axiom, then ax_1, ax_2, ... and an optional goal.
// Predicates get prefixes c_/r_/s_/j_ by kind and constants n_, lowercased,
// with a numeric suffix on collisions.
std::string emit_tptp(const TptpProblem& p);
std::string emit_tptp(const Sentence& s);

std::string to_string(const FormulaPtr& f);

// Number of formula nodes.
std::size_t size(const FormulaPtr& f);

}  // namespace shaclup::fol
