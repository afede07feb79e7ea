#include "crr/solver.hpp"

#include <algorithm>
#include <ostream>

namespace crr {

namespace {

// Luby sequence for restart scheduling.
int64_t luby(int64_t i) {
  int64_t k = 1;
  while ((1LL << k) - 1 < i + 1) ++k;
  while ((1LL << k) - 1 != i + 1) {
    i -= (1LL << (k - 1)) - 1;
    k = 1;
    while ((1LL << k) - 1 < i + 1) ++k;
  }
  return 1LL << (k - 1);
}

constexpr int kRestartBase = 100;

}  // namespace

Solver::Solver(uint64_t seed) : seed_(seed) {}

Var Solver::new_var() {
  assign_.push_back(-1);
  level_.push_back(0);
  reason_.push_back(-1);
  phase_.push_back(0);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  int v = num_vars() - 1;
  heap_push(v);
  return static_cast<Var>(v + 1);
}

void Solver::ensure_vars(Var up_to) {
  while (num_vars() < up_to) new_var();
}

int Solver::value_of(int il) const {
  int8_t a = assign_[static_cast<size_t>(ivar(il))];
  if (a < 0) return -1;
  return (a == 1) != ((il & 1) != 0) ? 1 : 0;
}

void Solver::add_clause(const Clause& c) { add_clause(std::span<const Lit>(c.lits())); }

void Solver::add_clause(std::span<const Lit> lits) {
  model_valid_ = false;
  if (root_conflict_) return;
  std::vector<int> ils;
  ils.reserve(lits.size());
  for (const Lit& l : lits) {
    ensure_vars(l.var());
    ils.push_back(ilit(l));
  }
  // Top-level simplification under current root assignments.
  if (decision_level() != 0) cancel_until(0);
  std::sort(ils.begin(), ils.end());
  ils.erase(std::unique(ils.begin(), ils.end()), ils.end());
  std::vector<int> kept;
  for (int il : ils) {
    if (std::find(kept.begin(), kept.end(), ineg(il)) != kept.end()) return;  // tautology
    int v = value_of(il);
    if (v == 1) return;  // already satisfied at root
    if (v == 0) continue;
    kept.push_back(il);
  }
  if (kept.empty()) {
    root_conflict_ = true;
    return;
  }
  if (kept.size() == 1) {
    if (!enqueue(kept[0], -1)) root_conflict_ = true;
    else if (propagate() != -1) root_conflict_ = true;
    return;
  }
  add_internal(std::move(kept), false);
}

void Solver::add_formula(const CnfFormula& f) {
  for (const Clause& c : f.clauses()) add_clause(c);
}

int Solver::add_internal(std::vector<int> lits, bool learnt) {
  Cls c;
  c.lits = std::move(lits);
  c.learnt = learnt;
  clauses_.push_back(std::move(c));
  int ci = static_cast<int>(clauses_.size()) - 1;
  attach(ci);
  return ci;
}

void Solver::attach(int ci) {
  const Cls& c = clauses_[static_cast<size_t>(ci)];
  watches_[static_cast<size_t>(ineg(c.lits[0]))].push_back(ci);
  watches_[static_cast<size_t>(ineg(c.lits[1]))].push_back(ci);
}

bool Solver::enqueue(int il, int reason) {
  int v = value_of(il);
  if (v == 0) return false;
  if (v == 1) return true;
  int var = ivar(il);
  assign_[static_cast<size_t>(var)] = (il & 1) ? 0 : 1;
  level_[static_cast<size_t>(var)] = decision_level();
  reason_[static_cast<size_t>(var)] = reason;
  trail_.push_back(il);
  return true;
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];
    ++stats_.propagations;
    std::vector<int>& ws = watches_[static_cast<size_t>(p)];
    size_t keep = 0;
    for (size_t wi = 0; wi < ws.size(); ++wi) {
      int ci = ws[wi];
      Cls& c = clauses_[static_cast<size_t>(ci)];
      // Make sure the falsified literal sits at position 1.
      if (c.lits[0] == ineg(p)) std::swap(c.lits[0], c.lits[1]);
      if (value_of(c.lits[0]) == 1) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value_of(c.lits[k]) != 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[static_cast<size_t>(ineg(c.lits[1]))].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Unit or conflicting.
      ws[keep++] = ci;
      if (!enqueue(c.lits[0], ci)) {
        for (size_t rest = wi + 1; rest < ws.size(); ++rest) ws[keep++] = ws[rest];
        ws.resize(keep);
        qhead_ = trail_.size();
        return ci;
      }
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::bump_var(int v) {
  activity_[static_cast<size_t>(v)] += var_inc_;
  if (activity_[static_cast<size_t>(v)] > 1e100) rescale_activity();
  if (in_heap(v)) heap_up(heap_pos_[static_cast<size_t>(v)]);
}

void Solver::rescale_activity() {
  for (double& a : activity_) a *= 1e-100;
  var_inc_ *= 1e-100;
}

void Solver::analyze(int confl, std::vector<int>& learnt, int& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int path = 0;
  int p = -1;
  size_t idx = trail_.size();

  int ci = confl;
  do {
    const Cls& c = clauses_[static_cast<size_t>(ci)];
    for (size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
      int q = c.lits[k];
      int v = ivar(q);
      if (seen_[static_cast<size_t>(v)] || level_[static_cast<size_t>(v)] == 0) continue;
      seen_[static_cast<size_t>(v)] = 1;
      bump_var(v);
      if (level_[static_cast<size_t>(v)] >= decision_level())
        ++path;
      else
        learnt.push_back(q);
    }
    while (!seen_[static_cast<size_t>(ivar(trail_[idx - 1]))]) --idx;
    p = trail_[--idx];
    seen_[static_cast<size_t>(ivar(p))] = 0;
    ci = reason_[static_cast<size_t>(ivar(p))];
    --path;
  } while (path > 0);
  learnt[0] = ineg(p);

  if (learnt.size() == 1) {
    bt_level = 0;
  } else {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[static_cast<size_t>(ivar(learnt[i]))] >
          level_[static_cast<size_t>(ivar(learnt[max_i]))])
        max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[static_cast<size_t>(ivar(learnt[1]))];
  }
  for (size_t i = 1; i < learnt.size(); ++i) seen_[static_cast<size_t>(ivar(learnt[i]))] = 0;
}

void Solver::analyze_final(int failed_ilit) {
  failed_.clear();
  failed_.push_back(xlit(failed_ilit));
  if (decision_level() == 0) return;
  seen_[static_cast<size_t>(ivar(failed_ilit))] = 1;
  for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[0]);) {
    int v = ivar(trail_[i]);
    if (!seen_[static_cast<size_t>(v)]) continue;
    int r = reason_[static_cast<size_t>(v)];
    if (r == -1) {
      failed_.push_back(xlit(trail_[i]));  // an assumption decision
    } else {
      const Cls& c = clauses_[static_cast<size_t>(r)];
      for (size_t k = 1; k < c.lits.size(); ++k)
        if (level_[static_cast<size_t>(ivar(c.lits[k]))] > 0)
          seen_[static_cast<size_t>(ivar(c.lits[k]))] = 1;
    }
    seen_[static_cast<size_t>(v)] = 0;
  }
  seen_[static_cast<size_t>(ivar(failed_ilit))] = 0;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[static_cast<size_t>(lvl)]);) {
    int v = ivar(trail_[i]);
    assign_[static_cast<size_t>(v)] = -1;
    phase_[static_cast<size_t>(v)] = (trail_[i] & 1) ? 0 : 1;
    reason_[static_cast<size_t>(v)] = -1;
    if (!in_heap(v)) heap_push(v);
  }
  trail_.resize(static_cast<size_t>(trail_lim_[static_cast<size_t>(lvl)]));
  trail_lim_.resize(static_cast<size_t>(lvl));
  qhead_ = trail_.size();
}

bool Solver::heap_less(int a, int b) const {
  double aa = activity_[static_cast<size_t>(a)];
  double ab = activity_[static_cast<size_t>(b)];
  if (aa != ab) return aa > ab;
  return a < b;
}

void Solver::heap_push(int v) {
  if (in_heap(v)) return;
  heap_pos_[static_cast<size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(static_cast<int>(heap_.size()) - 1);
}

void Solver::heap_up(int i) {
  int v = heap_[static_cast<size_t>(i)];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (!heap_less(v, heap_[static_cast<size_t>(parent)])) break;
    heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(parent)];
    heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
    i = parent;
  }
  heap_[static_cast<size_t>(i)] = v;
  heap_pos_[static_cast<size_t>(v)] = i;
}

void Solver::heap_down(int i) {
  int v = heap_[static_cast<size_t>(i)];
  int n = static_cast<int>(heap_.size());
  while (true) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n &&
        heap_less(heap_[static_cast<size_t>(child + 1)], heap_[static_cast<size_t>(child)]))
      ++child;
    if (!heap_less(heap_[static_cast<size_t>(child)], v)) break;
    heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(child)];
    heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
    i = child;
  }
  heap_[static_cast<size_t>(i)] = v;
  heap_pos_[static_cast<size_t>(v)] = i;
}

int Solver::heap_pop() {
  int v = heap_[0];
  heap_pos_[static_cast<size_t>(v)] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[static_cast<size_t>(last)] = 0;
    heap_down(0);
  }
  return v;
}

int Solver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assign_[static_cast<size_t>(v)] < 0)
      return 2 * v + (phase_[static_cast<size_t>(v)] ? 0 : 1);
  }
  return -1;
}

SolveStatus Solver::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  model_valid_ = false;
  failed_.clear();
  cancel_until(0);
  if (root_conflict_) return SolveStatus::kUnsat;
  for (const Lit& l : assumptions) ensure_vars(l.var());
  if (propagate() != -1) {
    root_conflict_ = true;
    return SolveStatus::kUnsat;
  }

  uint64_t conflicts_this_call = 0;
  int64_t restart_budget = kRestartBase * luby(0);
  int64_t restarts = 0;
  uint64_t conflicts_at_restart = 0;

  while (true) {
    int confl = propagate();
    if (confl != -1) {
      ++stats_.conflicts;
      ++conflicts_this_call;
      if (decision_level() == 0) {
        root_conflict_ = true;
        return SolveStatus::kUnsat;  // empty failed set: clauses alone are unsat
      }
      std::vector<int> learnt;
      int bt = 0;
      analyze(confl, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        // Unit learnt clauses assert at the root; if that contradicts the
        // assumptions, the re-assertion loop below reports the failed set.
        if (!enqueue(learnt[0], -1)) {
          root_conflict_ = true;
          return SolveStatus::kUnsat;
        }
      } else {
        int ci = add_internal(std::move(learnt), true);
        enqueue(clauses_[static_cast<size_t>(ci)].lits[0], ci);
      }
      decay_var_activity();
      continue;
    }

    if (conflict_budget_ >= 0 && conflicts_this_call > static_cast<uint64_t>(conflict_budget_)) {
      cancel_until(0);
      return SolveStatus::kResourceOut;
    }
    if (conflicts_this_call - conflicts_at_restart >= static_cast<uint64_t>(restart_budget)) {
      conflicts_at_restart = conflicts_this_call;
      restart_budget = kRestartBase * luby(++restarts);
      cancel_until(0);
      continue;
    }

    if (decision_level() < static_cast<int>(assumptions.size())) {
      int il = ilit(assumptions[static_cast<size_t>(decision_level())]);
      int v = value_of(il);
      if (v == 1) {
        new_decision_level();  // already satisfied, keep level alignment
        continue;
      }
      if (v == 0) {
        analyze_final(il);
        cancel_until(0);
        return SolveStatus::kUnsat;
      }
      ++stats_.decisions;
      new_decision_level();
      enqueue(il, -1);
      continue;
    }

    int next = pick_branch();
    if (next == -1) {
      model_valid_ = true;
      return SolveStatus::kSat;  // model read off assign_; trail kept until next call
    }
    ++stats_.decisions;
    new_decision_level();
    enqueue(next, -1);
  }
}

bool Solver::model_value(Var v) const {
  if (!model_valid_) throw StructureError("no model available");
  if (v < 1 || v > num_vars()) throw StructureError("model query for unknown variable");
  return assign_[static_cast<size_t>(v - 1)] == 1;
}

Assignment Solver::model(std::span<const Var> vars) const {
  Assignment a;
  for (Var v : vars) a.set(v, model_value(v));
  return a;
}

Assignment Solver::full_model() const {
  Assignment a;
  for (Var v = 1; v <= num_vars(); ++v) a.set(v, model_value(v));
  return a;
}

void Solver::dump_dimacs(std::ostream& os) const {
  size_t root_units = 0;
  size_t limit = trail_lim_.empty() ? trail_.size() : static_cast<size_t>(trail_lim_[0]);
  root_units = limit;
  os << "p cnf " << num_vars() << ' ' << (clauses_.size() + root_units + (root_conflict_ ? 1 : 0))
     << '\n';
  for (size_t i = 0; i < limit; ++i) os << xlit(trail_[i]).code << " 0\n";
  for (const Cls& c : clauses_) {
    for (int il : c.lits) os << xlit(il).code << ' ';
    os << "0\n";
  }
  if (root_conflict_) os << "0\n";
}

bool is_implied(const CnfFormula& f, const Clause& c, int64_t conflict_budget) {
  Solver s;
  s.set_conflict_budget(conflict_budget);
  s.add_formula(f);
  std::vector<Lit> assumptions;
  for (const Lit& l : c.lits()) assumptions.push_back(~l);
  switch (s.solve(assumptions)) {
    case SolveStatus::kSat: return false;
    case SolveStatus::kUnsat: return true;
    case SolveStatus::kResourceOut: throw ResourceOutError("is_implied");
  }
  return false;
}

}  // namespace crr
