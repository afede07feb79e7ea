#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crr/pqe.hpp"
#include "crr/transition_system.hpp"
#include "crr/unroll.hpp"

namespace crr {

// One time frame of a trace: a complete current-state assignment plus a
// complete combinational-input assignment.
struct InputPair {
  Assignment state;
  Assignment input;
};

struct Trace {
  std::vector<InputPair> steps;
  size_t length() const { return steps.size(); }
};

// Replay checks, all by circuit simulation.
bool trace_is_initialized(const TransitionSystem& ts, const Trace& t);
bool trace_is_linked(const TransitionSystem& ts, const Trace& t);
Assignment trace_reached_state(const TransitionSystem& ts, const Trace& t);
// Initialized, T-consistent, every step state good, reached state bad.
bool is_counterexample(const TransitionSystem& ts, const Trace& t);
// Longest prefix of a linked initialized trace that forms a counterexample.
std::optional<Trace> truncate_to_counterexample(const TransitionSystem& ts, const Trace& t);

struct CheckStats {
  uint64_t pqe_calls = 0;
  uint64_t sat_calls = 0;
  uint64_t frames_collapsed = 0;
  uint64_t clauses_learned = 0;
};

struct Verdict {
  enum class Kind : uint8_t { kCounterexample, kHoldsBounded, kHoldsByLoop, kResourceOut };

  Kind kind = Kind::kHoldsBounded;
  int bound = 0;
  Trace cex;           // kCounterexample only
  int loop_index = -1; // kHoldsByLoop: position in the collapsed trace that repeats
  std::string phase;   // kResourceOut: which sub-procedure ran out
  CheckStats stats;

  bool fails() const { return kind == Kind::kCounterexample; }
  bool holds() const { return kind == Kind::kHoldsBounded || kind == Kind::kHoldsByLoop; }
};

const char* to_string(Verdict::Kind kind);

// Test/diagnostic instrumentation; callbacks fire with the session's
// current initial formula so learned facts can be audited externally.
struct CrrObserver {
  virtual ~CrrObserver() = default;
  virtual void on_reduction_formula(int /*frame*/, const CnfFormula& /*h*/, const Clause& /*c*/,
                                    const CnfFormula& /*session_init*/) {}
  virtual void on_unreachable_clause(int /*frame*/, const Clause& /*learned*/,
                                     const CnfFormula& /*session_init*/) {}
  virtual void on_pn_equivalent_clause(const Clause& /*c*/, int /*bound*/,
                                       const CnfFormula& /*session_init*/) {}
  // `context` is the conjunction of initial-frame clauses already certified;
  // the nil certificate is relative to the context-constrained system.
  virtual void on_rr_nil(const Clause& /*c*/, const CnfFormula& /*context*/, int /*bound*/,
                         const CnfFormula& /*session_init*/) {}
};

struct CheckOptions {
  uint64_t seed = 1;
  int64_t conflict_budget = kDefaultConflictBudget;
  double wall_budget_secs = 0;  // 0 = unlimited
  bool expand_excluding_clauses = false;
  CrrObserver* observer = nullptr;
};

// Per-clause bundle built while certifying one constraining clause:
// approximate reduction formulas h[1..n] and unreachability filters u[1..n],
// both over the base state variables, plus the unrolled prefix the
// quantified problems range over.
struct RangeReductionState {
  Clause c;
  CnfFormula context;  // initial-frame clauses already certified (over S ∪ X)
  std::vector<CnfFormula> h;
  std::vector<CnfFormula> u;
  int frames = 0;
  CnfFormula phi;
};

// One bounded-check session. Frames collapse by re-rooting the initial
// formula at the forced successor state; the unrolling (and its variable
// pool) is shared across the whole session.
class CrrSession {
 public:
  CrrSession(const TransitionSystem& ts, CheckOptions opt);

  const TransitionSystem& system() const { return *ts_; }
  const CnfFormula& current_init() const { return init_; }
  void reroot(const Assignment& new_init_state);

  // Deterministic model of init ∧ G ∧ protect projected to (S, X), or
  // nothing when every pair is excluded.
  std::optional<InputPair> pick_input_pair(const CnfFormula& g, const Clause* protect);

  // The longest clause falsified by the pair: its literal-wise negation
  // over S ∪ X. Consequently ~C implies the current init and C excludes no
  // other pair.
  Clause excluding_clause(const InputPair& pair) const;

  // Excludes every initial input pair but the one falsifying `protect`;
  // returns a counterexample trace rooted at the current frame, or nothing
  // once all other pairs carry bound-equivalent clauses.
  std::optional<Trace> constr_time_frame(const Clause& protect, int bound);

  // Certifies one constraining clause against the system already constrained
  // by `frame0_context` (the clauses certified before it — certificates do
  // not compose otherwise): computes reduction formulas frame by frame,
  // eliminating excluded bad states; nothing means the clause is safe to add
  // for this bound.
  std::optional<Trace> comp_rr_form(const Clause& c, int bound,
                                    RangeReductionState* out_state = nullptr,
                                    const CnfFormula* frame0_context = nullptr);

  RangeReductionState make_rr_state(const Clause& c, int bound,
                                    const CnfFormula* frame0_context = nullptr) const;

  // Reduction formula for frame j+1 (over base state variables), from the
  // frame-j formula in `rr` and the unrolled prefix.
  CnfFormula reduction_formula(RangeReductionState& rr, int j);

  // Processes every bad state excluded by rr.h[j]: each is either shown
  // reachable (trace returned) or blocked by a new filter clause in rr.u[j].
  std::optional<Trace> elim_bad_states(RangeReductionState& rr, int j);

  // Backward search for an initialized trace reaching `bad_state` at frame
  // k; returns the trace, or the clause proving the state unreachable.
  std::variant<Trace, Clause> prop_back(const Assignment& bad_state, int k,
                                        RangeReductionState& rr);

  CheckStats& stats() { return stats_; }
  Unrolling& unrolling() { return unroll_; }

 private:
  friend std::vector<CnfFormula> range_reduction_chain(const TransitionSystem&, const Clause&,
                                                       int, const CheckOptions&);
  const CnfFormula& prefix(int j);  // init at frame 0 conjoined with T_0..T_{j-1}
  Solver make_solver();
  void check_wall(const char* phase) const;
  void learn_unreachable(RangeReductionState& rr, int frame, const Clause& cl);
  bool excludes_good_state(const CnfFormula& h);
  bool all_excluded_filtered(const CnfFormula& h, const CnfFormula& u);
  Assignment extract_bad_state(const CnfFormula& h, const CnfFormula& u, bool& found);

  const TransitionSystem* ts_;
  CheckOptions opt_;
  Unrolling unroll_;
  CnfFormula init_;
  std::vector<CnfFormula> prefix_;
  CheckStats stats_;
  std::chrono::steady_clock::time_point start_;
};

// Bounded check: counterexample of length ≤ n, or a proof that the property
// holds for n transitions (by frame collapse or by closing a loop of
// forced states). Resource exhaustion is an explicit verdict.
Verdict mc_crr(const TransitionSystem& ts, int n, const CheckOptions& opt = {});

// The reduction-formula chain for a fixed constraining clause, computed for
// every frame 1..n with no bad-state elimination; used by diagnostics and
// containment tests.
std::vector<CnfFormula> range_reduction_chain(const TransitionSystem& ts, const Clause& c, int n,
                                              const CheckOptions& opt = {});

}  // namespace crr
