#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "crr/cnf.hpp"

namespace crr {

enum class SolveStatus : uint8_t { kSat, kUnsat, kResourceOut };

struct SolverStats {
  uint64_t solves = 0;
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
};

inline constexpr int64_t kDefaultConflictBudget = 10'000'000;

// Incremental CDCL solver with assumptions: two-watched literals, first-UIP
// learning, VSIDS with lowest-id tie break, Luby restarts, phase saving
// (false-first). Fully deterministic: identical clause stream, assumptions
// and seed give an identical answer and an identical model.
class Solver {
 public:
  explicit Solver(uint64_t seed = 1);

  Var new_var();
  void ensure_vars(Var up_to);
  int num_vars() const { return static_cast<int>(assign_.size()); }

  void add_clause(const Clause& c);
  void add_clause(std::span<const Lit> lits);
  void add_formula(const CnfFormula& f);

  // Conflict budget per solve() call; exceeded budget reports kResourceOut,
  // never a wrong verdict.
  void set_conflict_budget(int64_t budget) { conflict_budget_ = budget; }

  SolveStatus solve(std::span<const Lit> assumptions = {});
  SolveStatus solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  // After kSat: complete model over all registered variables.
  bool model_value(Var v) const;
  Assignment model(std::span<const Var> vars) const;
  Assignment full_model() const;

  // After kUnsat under assumptions: a subset of the assumption literals that
  // is already unsatisfiable with the loaded clauses. Not minimized.
  const std::vector<Lit>& failed_assumptions() const { return failed_; }

  const SolverStats& stats() const { return stats_; }
  uint64_t seed() const { return seed_; }

  // Current clause database (root-level units, problem and learnt clauses)
  // in DIMACS form, for external cross-checking.
  void dump_dimacs(std::ostream& os) const;

 private:
  struct Cls {
    std::vector<int> lits;  // internal encoding
    bool learnt = false;
    double act = 0.0;
  };

  // Internal literal encoding: 2*v + sign with v zero-based.
  static int ilit(Lit l) { return 2 * (l.var() - 1) + (l.negated() ? 1 : 0); }
  static Lit xlit(int il) { return Lit(static_cast<Var>(il / 2 + 1), (il & 1) != 0); }
  static int ineg(int il) { return il ^ 1; }
  static int ivar(int il) { return il >> 1; }

  int value_of(int il) const;  // 1 true, 0 false, -1 unassigned
  bool enqueue(int il, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int confl, std::vector<int>& learnt, int& bt_level);
  void analyze_final(int failed_ilit);
  void cancel_until(int level);
  int pick_branch();  // internal lit or -1 when all assigned
  void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void bump_var(int v);
  void decay_var_activity() { var_inc_ /= 0.95; }
  void rescale_activity();
  void attach(int ci);
  int add_internal(std::vector<int> lits, bool learnt);

  // Heap keyed by (activity desc, var asc).
  bool heap_less(int a, int b) const;
  void heap_push(int v);
  int heap_pop();
  void heap_up(int i);
  void heap_down(int i);
  bool in_heap(int v) const { return heap_pos_[v] >= 0; }

  uint64_t seed_;
  int64_t conflict_budget_ = kDefaultConflictBudget;

  std::vector<Cls> clauses_;
  std::vector<std::vector<int>> watches_;  // per internal literal
  std::vector<int8_t> assign_;             // per var: -1 unassigned, 0 false, 1 true
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<uint8_t> phase_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;

  std::vector<int> heap_;
  std::vector<int> heap_pos_;

  std::vector<uint8_t> seen_;
  std::vector<Lit> failed_;
  bool root_conflict_ = false;
  bool model_valid_ = false;

  SolverStats stats_;
};

// True iff f implies c, decided by testing f /\ ~c with the literals of ~c
// supplied as assumptions. Throws ResourceOutError when the budget runs out.
bool is_implied(const CnfFormula& f, const Clause& c,
                int64_t conflict_budget = kDefaultConflictBudget);

}  // namespace crr
