#include "shaclup/sat.hpp"

#include <algorithm>

namespace shaclup::sat {

namespace {

// Luby sequence 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  std::uint64_t x = i;
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::uint64_t{1} << seq;
}

constexpr double kVarDecay = 0.95;
constexpr std::uint64_t kRestartBase = 100;

}  // namespace

Var Solver::new_var() {
  Var v = num_vars();
  assign_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(-1);
  phase_.push_back(false);
  seen_.push_back(false);
  activity_.push_back(0.0);
  heap_index_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

bool Solver::add_clause(std::vector<Lit> lits) {
  if (!ok_) return false;
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    Lit l = lits[i];
    if (value(l) == kTrue) return true;
    if (i + 1 < lits.size() && lits[i + 1] == ~l) return true;
    if (value(l) == kFalse) continue;
    if (!kept.empty() && kept.back() == l) continue;
    kept.push_back(l);
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) ok_ = false;
    return ok_;
  }
  attach(std::move(kept));
  return true;
}

int Solver::attach(std::vector<Lit> lits, bool learnt, int lbd) {
  int index = static_cast<int>(clauses_.size());
  watches_[static_cast<std::size_t>(lits[0].code)].push_back({index, lits[1]});
  watches_[static_cast<std::size_t>(lits[1].code)].push_back({index, lits[0]});
  if (learnt) ++live_learnts_;
  clauses_.push_back(Clause{std::move(lits), learnt, false, lbd});
  return index;
}

bool Solver::locked(int ci) const {
  const auto& c = clauses_[static_cast<std::size_t>(ci)].lits;
  return reason_[static_cast<std::size_t>(c[0].var())] == ci && value(c[0]) == kTrue;
}

int Solver::lbd_of(const std::vector<Lit>& lits) {
  ++stamp_;
  int n = 0;
  for (Lit l : lits) {
    auto lv = static_cast<std::size_t>(level_[static_cast<std::size_t>(l.var())]);
    if (level_stamp_.size() <= lv) level_stamp_.resize(lv + 1, 0);
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++n;
    }
  }
  return n;
}

// Drops the worse half of the learnt clauses; glue clauses (LBD <= 2) and
// reasons stay.
void Solver::reduce_learnts() {
  std::vector<int> cands;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    const Clause& c = clauses_[i];
    if (c.learnt && !c.deleted && c.lbd > 2 && !locked(static_cast<int>(i)))
      cands.push_back(static_cast<int>(i));
  }
  std::sort(cands.begin(), cands.end(), [&](int a, int b) {
    int la = clauses_[static_cast<std::size_t>(a)].lbd, lb = clauses_[static_cast<std::size_t>(b)].lbd;
    return la != lb ? la > lb : a < b;
  });
  for (std::size_t i = 0; i < cands.size() / 2; ++i) {
    Clause& c = clauses_[static_cast<std::size_t>(cands[i])];
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    --live_learnts_;
  }
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watch& w) {
                              return clauses_[static_cast<std::size_t>(w.clause)].deleted;
                            }),
             ws.end());
}

void Solver::enqueue(Lit l, int reason) {
  auto v = static_cast<std::size_t>(l.var());
  assign_[v] = l.negated() ? kFalse : kTrue;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = ~p;
    auto& ws = watches_[static_cast<std::size_t>(false_lit.code)];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watch w = ws[i++];
      if (value(w.blocker) == kTrue) {
        ws[j++] = w;
        continue;
      }
      auto& c = clauses_[static_cast<std::size_t>(w.clause)].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      Lit first = c[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.clause, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[static_cast<std::size_t>(c[1].code)].push_back({w.clause, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.clause, first};
      if (value(first) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.clause;
      }
      enqueue(first, w.clause);
    }
    ws.resize(j);
  }
  return -1;
}

// True when p is implied by the other literals of the learnt clause (all of
// them marked in seen_); `levels` is a bit mask of their decision levels.
bool Solver::redundant(Lit p, std::uint32_t levels) {
  analyze_stack_.assign(1, p);
  const std::size_t top = to_clear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const auto& c = clauses_[static_cast<std::size_t>(reason_[static_cast<std::size_t>(q.var())])].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      auto v = static_cast<std::size_t>(c[k].var());
      if (seen_[v] || level_[v] == 0) continue;
      if (reason_[v] >= 0 && (levels >> (level_[v] & 31) & 1u)) {
        seen_[v] = true;
        analyze_stack_.push_back(c[k]);
        to_clear_.push_back(static_cast<Var>(v));
      } else {
        for (std::size_t i = top; i < to_clear_.size(); ++i)
          seen_[static_cast<std::size_t>(to_clear_[i])] = false;
        to_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze(int conflict, std::vector<Lit>& learnt, int& backjump) {
  learnt.assign(1, Lit{});
  to_clear_.clear();
  int pending = 0;
  Lit p;
  auto index = static_cast<std::ptrdiff_t>(trail_.size()) - 1;
  do {
    const auto& c = clauses_[static_cast<std::size_t>(conflict)].lits;
    for (std::size_t k = p.code < 0 ? 0 : 1; k < c.size(); ++k) {
      Lit q = c[k];
      auto v = static_cast<std::size_t>(q.var());
      if (seen_[v] || level_[v] == 0) continue;
      bump(q.var());
      seen_[v] = true;
      to_clear_.push_back(q.var());
      if (level_[v] >= decision_level())
        ++pending;
      else
        learnt.push_back(q);
    }
    while (!seen_[static_cast<std::size_t>(trail_[static_cast<std::size_t>(index--)].var())]) {
    }
    p = trail_[static_cast<std::size_t>(index + 1)];
    conflict = reason_[static_cast<std::size_t>(p.var())];
    seen_[static_cast<std::size_t>(p.var())] = false;
    --pending;
  } while (pending > 0);
  learnt[0] = ~p;

  std::uint32_t levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i)
    levels |= 1u << (level_[static_cast<std::size_t>(learnt[i].var())] & 31);
  std::size_t kept = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    auto v = static_cast<std::size_t>(learnt[i].var());
    if (reason_[v] < 0 || !redundant(learnt[i], levels)) learnt[kept++] = learnt[i];
  }
  learnt.resize(kept);

  backjump = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    int lv = level_[static_cast<std::size_t>(learnt[i].var())];
    if (lv > backjump) {
      backjump = lv;
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (Var v : to_clear_) seen_[static_cast<std::size_t>(v)] = false;
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t i = trail_.size(); i-- > stop;) {
    auto v = static_cast<std::size_t>(trail_[i].var());
    phase_[v] = !trail_[i].negated();
    assign_[v] = kUndef;
    reason_[v] = -1;
    heap_insert(static_cast<Var>(v));
  }
  trail_.resize(stop);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = stop;
}

void Solver::bump(Var v) {
  auto i = static_cast<std::size_t>(v);
  if ((activity_[i] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[i] >= 0) heap_up(static_cast<std::size_t>(heap_index_[i]));
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assign_[static_cast<std::size_t>(v)] == kUndef)
      return phase_[static_cast<std::size_t>(v)] ? pos(v) : neg(v);
  }
  return Lit{};
}

Solver::SearchResult Solver::search(std::uint64_t restart_after,
                                    const std::vector<Lit>& assumptions,
                                    std::uint64_t budget_end) {
  std::uint64_t local = 0;
  std::vector<Lit> learnt;
  for (;;) {
    int conflict = propagate();
    if (conflict >= 0) {
      ++stats_.conflicts;
      ++local;
      if (decision_level() == 0) return SearchResult::Unsat;
      int backjump = 0;
      analyze(conflict, learnt, backjump);
      cancel_until(backjump);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = attach(learnt, true, lbd_of(learnt));
        enqueue(learnt[0], ci);
      }
      var_inc_ /= kVarDecay;
      continue;
    }
    if (budget_end && stats_.conflicts >= budget_end) return SearchResult::Budget;
    if (local >= restart_after) return SearchResult::Restart;
    if (static_cast<double>(live_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
      reduce_learnts();
      max_learnts_ *= 1.1;
    }

    Lit next;
    while (decision_level() < static_cast<int>(assumptions.size())) {
      Lit a = assumptions[static_cast<std::size_t>(decision_level())];
      if (value(a) == kTrue) {
        trail_lim_.push_back(trail_.size());
      } else if (value(a) == kFalse) {
        return SearchResult::AssumptionFailed;
      } else {
        next = a;
        break;
      }
    }
    if (next.code < 0) {
      ++stats_.decisions;
      next = pick_branch();
      if (next.code < 0) return SearchResult::Sat;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(next, -1);
  }
}

Result Solver::solve(const std::vector<Lit>& assumptions, std::uint64_t conflict_budget) {
  model_.clear();
  if (!ok_) return Result::Unsat;
  std::uint64_t budget_end = conflict_budget ? stats_.conflicts + conflict_budget : 0;
  if (max_learnts_ == 0.0)
    max_learnts_ = std::max(2000.0, static_cast<double>(clauses_.size()) / 3.0);
  for (std::uint64_t round = 0;; ++round) {
    SearchResult r = search(luby(round) * kRestartBase, assumptions, budget_end);
    if (r == SearchResult::Sat) {
      model_.resize(assign_.size());
      for (std::size_t v = 0; v < assign_.size(); ++v) model_[v] = assign_[v] == kTrue;
      cancel_until(0);
      return Result::Sat;
    }
    cancel_until(0);
    if (r == SearchResult::Unsat) ok_ = false;
    if (r == SearchResult::Unsat || r == SearchResult::AssumptionFailed) return Result::Unsat;
    if (r == SearchResult::Budget) return Result::Unknown;
    ++stats_.restarts;
  }
}

bool Solver::heap_less(Var a, Var b) const {
  double x = activity_[static_cast<std::size_t>(a)];
  double y = activity_[static_cast<std::size_t>(b)];
  return x > y || (x == y && a < b);
}

void Solver::heap_insert(Var v) {
  if (heap_index_[static_cast<std::size_t>(v)] >= 0) return;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

Var Solver::heap_pop() {
  Var top = heap_.front();
  heap_index_[static_cast<std::size_t>(top)] = -1;
  Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[static_cast<std::size_t>(last)] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

}  // namespace shaclup::sat
