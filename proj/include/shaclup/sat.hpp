#pragma once

#include <cstdint>
#include <vector>

namespace shaclup::sat {

using Var = int;

// Literal code: 2*var for the positive literal, 2*var+1 for its negation.
struct Lit {
  int code = -1;

  Var var() const { return code >> 1; }
  bool negated() const { return code & 1; }
  Lit operator~() const { return Lit{code ^ 1}; }
  friend bool operator==(Lit a, Lit b) { return a.code == b.code; }
  friend bool operator!=(Lit a, Lit b) { return a.code != b.code; }
  friend bool operator<(Lit a, Lit b) { return a.code < b.code; }
};

inline Lit pos(Var v) { return Lit{2 * v}; }
inline Lit neg(Var v) { return Lit{2 * v + 1}; }

enum class Result { Sat, Unsat, Unknown };

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

// CDCL solver: two watched literals with blockers, first-UIP learning with
// clause minimization, LBD-based learnt clause deletion, VSIDS, phase saving,
// Luby restarts, solving under assumptions. Branching prefers the negative
// phase until a phase has been saved.
class Solver {
 public:
  Var new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }

  // Only valid between solve() calls. Returns false once the clause set is
  // known to be unsatisfiable.
  bool add_clause(std::vector<Lit> lits);

  // conflict_budget == 0 means unlimited; Unknown is returned once it is spent.
  Result solve(const std::vector<Lit>& assumptions = {},
               std::uint64_t conflict_budget = 0);

  // Value in the last model (after solve() returned Sat).
  bool model_value(Var v) const { return model_[static_cast<std::size_t>(v)]; }
  bool model_value(Lit l) const { return model_value(l.var()) != l.negated(); }

  const SolverStats& stats() const { return stats_; }

 private:
  enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = -1 };

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    int lbd = 0;
  };

  struct Watch {
    int clause;
    Lit blocker;
  };

  enum class SearchResult { Sat, Unsat, AssumptionFailed, Restart, Budget };

  std::int8_t value(Lit l) const {
    std::int8_t a = assign_[static_cast<std::size_t>(l.var())];
    if (a == kUndef) return kUndef;
    return static_cast<std::int8_t>(a ^ (l.negated() ? 1 : 0));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, int reason);
  int propagate();
  void analyze(int conflict, std::vector<Lit>& learnt, int& backjump);
  void cancel_until(int level);
  int attach(std::vector<Lit> lits, bool learnt = false, int lbd = 0);
  bool redundant(Lit p, std::uint32_t levels);
  int lbd_of(const std::vector<Lit>& lits);
  bool locked(int ci) const;
  void reduce_learnts();
  Lit pick_branch();
  void bump(Var v);
  SearchResult search(std::uint64_t restart_after, const std::vector<Lit>& assumptions,
                      std::uint64_t budget_end);

  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(Var a, Var b) const;

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::size_t live_learnts_ = 0;
  double max_learnts_ = 0.0;
  std::vector<Lit> analyze_stack_;
  std::vector<Var> to_clear_;
  std::vector<int> level_stamp_;
  int stamp_ = 0;
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<bool> phase_;
  std::vector<bool> seen_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<Var> heap_;
  std::vector<int> heap_index_;
  std::vector<bool> model_;
  bool ok_ = true;
  SolverStats stats_;
};

}  // namespace shaclup::sat
