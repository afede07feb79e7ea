#include "crr/checker.hpp"

#include <algorithm>

namespace crr {

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kCounterexample: return "counterexample";
    case Verdict::Kind::kHoldsBounded: return "holds_bounded";
    case Verdict::Kind::kHoldsByLoop: return "holds_by_loop";
    case Verdict::Kind::kResourceOut: return "resource_out";
  }
  return "?";
}

bool trace_is_initialized(const TransitionSystem& ts, const Trace& t) {
  if (t.steps.empty()) return true;
  return evaluate(ts.init, t.steps.front().state) == Ternary::kTrue;
}

bool trace_is_linked(const TransitionSystem& ts, const Trace& t) {
  for (size_t i = 0; i + 1 < t.steps.size(); ++i) {
    Assignment next = ts.successor(t.steps[i].state, t.steps[i].input);
    if (!(next == t.steps[i + 1].state.project(ts.state_vars))) return false;
  }
  return true;
}

Assignment trace_reached_state(const TransitionSystem& ts, const Trace& t) {
  if (t.steps.empty()) throw StructureError("empty trace reaches no state");
  return ts.successor(t.steps.back().state, t.steps.back().input);
}

bool is_counterexample(const TransitionSystem& ts, const Trace& t) {
  if (t.steps.empty()) return false;
  if (!trace_is_initialized(ts, t) || !trace_is_linked(ts, t)) return false;
  for (const InputPair& p : t.steps)
    if (!ts.state_is_good(p.state)) return false;
  return !ts.state_is_good(trace_reached_state(ts, t));
}

std::optional<Trace> truncate_to_counterexample(const TransitionSystem& ts, const Trace& t) {
  if (t.steps.empty() || !trace_is_initialized(ts, t) || !trace_is_linked(ts, t))
    return std::nullopt;
  if (!ts.state_is_good(t.steps.front().state)) return std::nullopt;
  Trace out;
  for (const InputPair& p : t.steps) {
    out.steps.push_back(p);
    Assignment next = ts.successor(p.state, p.input);
    if (!ts.state_is_good(next)) return out;
  }
  return std::nullopt;
}

CrrSession::CrrSession(const TransitionSystem& ts, CheckOptions opt)
    : ts_(&ts), opt_(opt), unroll_(ts), init_(ts.init),
      start_(std::chrono::steady_clock::now()) {}

void CrrSession::reroot(const Assignment& new_init_state) {
  init_ = cube_formula(new_init_state, ts_->state_vars);
  prefix_.clear();
}

void CrrSession::check_wall(const char* phase) const {
  if (opt_.wall_budget_secs <= 0) return;
  auto now = std::chrono::steady_clock::now();
  if (std::chrono::duration<double>(now - start_).count() > opt_.wall_budget_secs)
    throw ResourceOutError(phase);
}

Solver CrrSession::make_solver() {
  Solver s(opt_.seed);
  s.set_conflict_budget(opt_.conflict_budget);
  s.ensure_vars(static_cast<Var>(unroll_.pool().size()));
  return s;
}

const CnfFormula& CrrSession::prefix(int j) {
  if (prefix_.empty()) prefix_.push_back(init_);
  while (static_cast<int>(prefix_.size()) <= j) {
    int f = static_cast<int>(prefix_.size());
    CnfFormula next = prefix_.back();
    next.add_all(unroll_.t_frame(f - 1));
    prefix_.push_back(std::move(next));
  }
  return prefix_[static_cast<size_t>(j)];
}

std::optional<InputPair> CrrSession::pick_input_pair(const CnfFormula& g, const Clause* protect) {
  check_wall("pick_input_pair");
  Solver s = make_solver();
  s.add_formula(init_);
  s.add_formula(g);
  if (protect) s.add_clause(*protect);
  ++stats_.sat_calls;
  switch (s.solve()) {
    case SolveStatus::kSat:
      return InputPair{s.model(ts_->state_vars), s.model(ts_->input_vars)};
    case SolveStatus::kUnsat: return std::nullopt;
    case SolveStatus::kResourceOut: throw ResourceOutError("pick_input_pair");
  }
  return std::nullopt;
}

Clause CrrSession::excluding_clause(const InputPair& pair) const {
  Assignment both = pair.state;
  both.merge(pair.input);
  std::vector<Var> vars = ts_->state_vars;
  vars.insert(vars.end(), ts_->input_vars.begin(), ts_->input_vars.end());
  return blocking_clause(both, vars);
}

RangeReductionState CrrSession::make_rr_state(const Clause& c, int bound,
                                              const CnfFormula* frame0_context) const {
  RangeReductionState rr;
  rr.c = c;
  if (frame0_context) rr.context = *frame0_context;
  rr.h.resize(static_cast<size_t>(bound) + 1);
  rr.u.resize(static_cast<size_t>(bound) + 1);
  return rr;
}

CnfFormula CrrSession::reduction_formula(RangeReductionState& rr, int j) {
  check_wall("reduction_formula");
  PqeProblem p;
  p.g = prefix(j + 1);
  p.g.add_all(rr.context);  // certified clauses restrict the trace universe
  if (j == 0) {
    p.f.add(rr.c);  // the constraining clause lives in the initial frame
  } else {
    p.f = unroll_.state_formula_at(rr.h[static_cast<size_t>(j)], j);
  }
  std::span<const Var> free_span = unroll_.state_vars(j + 1);
  p.free_vars.assign(free_span.begin(), free_span.end());
  p.quantified = unroll_.quantified_through(j);

  PqeOptions po;
  po.seed = opt_.seed;
  po.conflict_budget = opt_.conflict_budget;
  po.wall_budget_secs = opt_.wall_budget_secs;
  PqeSolution sol = take_out(p, po);
  ++stats_.pqe_calls;
  stats_.sat_calls += sol.stats.sat_calls;
  if (sol.resource_out) throw ResourceOutError("reduction_formula");

  // Back to base state variables for storage and single-frame reasoning.
  std::unordered_map<Var, Var> back;
  for (size_t i = 0; i < ts_->state_vars.size(); ++i)
    back[free_span[i]] = ts_->state_vars[i];
  CnfFormula h = rename_formula(sol.h, back);
  rr.phi = p.g;
  rr.frames = j + 1;
  if (opt_.observer) opt_.observer->on_reduction_formula(j + 1, h, rr.c, init_);
  return h;
}

bool CrrSession::excludes_good_state(const CnfFormula& h) {
  Solver s = make_solver();
  VariablePool& pool = unroll_.pool();
  s.add_formula(negate_to_cnf(h, pool));
  s.ensure_vars(static_cast<Var>(pool.size()));
  s.add_formula(ts_->prop_good);
  ++stats_.sat_calls;
  switch (s.solve()) {
    case SolveStatus::kSat: return true;
    case SolveStatus::kUnsat: return false;
    case SolveStatus::kResourceOut: throw ResourceOutError("excluded-state classification");
  }
  return false;
}

bool CrrSession::all_excluded_filtered(const CnfFormula& h, const CnfFormula& u) {
  Solver s = make_solver();
  VariablePool& pool = unroll_.pool();
  s.add_formula(negate_to_cnf(h, pool));
  s.ensure_vars(static_cast<Var>(pool.size()));
  s.add_formula(u);
  ++stats_.sat_calls;
  switch (s.solve()) {
    case SolveStatus::kSat: return false;
    case SolveStatus::kUnsat: return true;
    case SolveStatus::kResourceOut: throw ResourceOutError("filter-coverage check");
  }
  return true;
}

Assignment CrrSession::extract_bad_state(const CnfFormula& h, const CnfFormula& u, bool& found) {
  Solver s = make_solver();
  VariablePool& pool = unroll_.pool();
  s.add_formula(negate_to_cnf(h, pool));
  s.ensure_vars(static_cast<Var>(pool.size()));
  s.add_formula(u);
  s.add_formula(ts_->prop_bad);
  ++stats_.sat_calls;
  switch (s.solve()) {
    case SolveStatus::kSat:
      found = true;
      return s.model(ts_->state_vars);
    case SolveStatus::kUnsat:
      found = false;
      return Assignment{};
    case SolveStatus::kResourceOut: throw ResourceOutError("elim_bad_states");
  }
  found = false;
  return Assignment{};
}

void CrrSession::learn_unreachable(RangeReductionState& rr, int frame, const Clause& cl) {
  rr.u[static_cast<size_t>(frame)].add(cl);
  ++stats_.clauses_learned;
  if (opt_.observer) opt_.observer->on_unreachable_clause(frame, cl, init_);
}

std::optional<Trace> CrrSession::elim_bad_states(RangeReductionState& rr, int j) {
  while (true) {
    check_wall("elim_bad_states");
    bool found = false;
    Assignment bad = extract_bad_state(rr.h[static_cast<size_t>(j)], rr.u[static_cast<size_t>(j)], found);
    if (!found) return std::nullopt;
    auto result = prop_back(bad, j, rr);
    if (std::holds_alternative<Trace>(result)) return std::get<Trace>(result);
    learn_unreachable(rr, j, std::get<Clause>(result));
  }
}

std::variant<Trace, Clause> CrrSession::prop_back(const Assignment& bad_state, int k,
                                                  RangeReductionState& rr) {
  if (k <= 0)
    throw StructureError("prop_back at frame 0 violates the init-implies-property assumption");
  if (!bad_state.complete_over(ts_->state_vars))
    throw StructureError("prop_back needs a complete state assignment");

  std::vector<Assignment> state_at(static_cast<size_t>(k) + 1);
  std::vector<std::optional<InputPair>> pair_at(static_cast<size_t>(k));
  state_at[static_cast<size_t>(k)] = bad_state;

  int j = k;
  while (true) {
    check_wall("prop_back");
    if (j == 0) {
      Trace out;
      for (int m = 0; m < k; ++m) out.steps.push_back(*pair_at[static_cast<size_t>(m)]);
      return out;
    }
    // One-step query: a predecessor of state_at[j] that the frame-(j-1)
    // filter has not ruled out. The target state enters as assumptions so
    // the failed set shortens the learned clause.
    Solver s = make_solver();
    s.add_formula(ts_->trans);
    if (j - 1 == 0) s.add_formula(init_);
    else s.add_formula(rr.u[static_cast<size_t>(j - 1)]);
    std::vector<Lit> assumptions;
    for (size_t i = 0; i < ts_->state_vars.size(); ++i) {
      bool bit = *state_at[static_cast<size_t>(j)].value(ts_->state_vars[i]);
      assumptions.push_back(Lit(ts_->next_state_vars[i], !bit));
    }
    ++stats_.sat_calls;
    SolveStatus st = s.solve(assumptions);
    if (st == SolveStatus::kResourceOut) throw ResourceOutError("prop_back");
    if (st == SolveStatus::kSat) {
      InputPair pred{s.model(ts_->state_vars), s.model(ts_->input_vars)};
      state_at[static_cast<size_t>(j - 1)] = pred.state;
      pair_at[static_cast<size_t>(j - 1)] = std::move(pred);
      --j;
      continue;
    }
    // No predecessor: the state is unreachable at this depth. Map the failed
    // next-state literals back to state variables.
    std::vector<Lit> learned;
    for (const Lit& l : s.failed_assumptions()) {
      auto it = std::find(ts_->next_state_vars.begin(), ts_->next_state_vars.end(), l.var());
      if (it == ts_->next_state_vars.end()) continue;
      size_t i = static_cast<size_t>(it - ts_->next_state_vars.begin());
      learned.push_back(Lit(ts_->state_vars[i], !l.negated()));
    }
    Clause cl(learned);
    if (j == k) return cl;
    learn_unreachable(rr, j, cl);
    pair_at[static_cast<size_t>(j)] = std::nullopt;
    ++j;
  }
}

std::optional<Trace> CrrSession::comp_rr_form(const Clause& c, int bound,
                                              RangeReductionState* out_state,
                                              const CnfFormula* frame0_context) {
  RangeReductionState rr = make_rr_state(c, bound, frame0_context);
  std::optional<Trace> result;
  for (int j = 0; j < bound; ++j) {
    rr.h[static_cast<size_t>(j) + 1] = reduction_formula(rr, j);
    const CnfFormula& h = rr.h[static_cast<size_t>(j) + 1];
    if (h.empty()) {
      // Nothing excluded at this frame, so nothing can be excluded later:
      // the clause is safe for any bound.
      if (opt_.observer) opt_.observer->on_rr_nil(c, rr.context, bound, init_);
      if (out_state) *out_state = std::move(rr);
      return std::nullopt;
    }
    result = elim_bad_states(rr, j + 1);
    if (result) {
      if (out_state) *out_state = std::move(rr);
      return result;
    }
    // Early certificate: if the formula excludes no good state, the filter
    // clauses already cover everything it excludes; then no deeper frame
    // can exclude a reachable state either. The coverage check is only
    // attempted in that cheap case.
    if (!excludes_good_state(h) &&
        all_excluded_filtered(h, rr.u[static_cast<size_t>(j) + 1])) {
      if (opt_.observer) opt_.observer->on_rr_nil(c, rr.context, bound, init_);
      if (out_state) *out_state = std::move(rr);
      return std::nullopt;
    }
  }
  if (opt_.observer) opt_.observer->on_rr_nil(c, rr.context, bound, init_);
  if (out_state) *out_state = std::move(rr);
  return std::nullopt;
}

std::optional<Trace> CrrSession::constr_time_frame(const Clause& protect, int bound) {
  CnfFormula accumulated;  // clauses certified so far, each relative to the last
  while (true) {
    check_wall("constr_time_frame");
    std::optional<InputPair> pair = pick_input_pair(accumulated, &protect);
    if (!pair) return std::nullopt;
    Clause c = excluding_clause(*pair);
    if (opt_.expand_excluding_clauses) {
      CnfFormula context = ts_->trans;
      context.add_all(init_);
      std::vector<Var> candidates = ts_->state_vars;
      candidates.insert(candidates.end(), ts_->input_vars.begin(), ts_->input_vars.end());
      PqeOptions po;
      po.conflict_budget = opt_.conflict_budget;
      c = expand_clause(c, context, candidates, po);
    }
    std::optional<Trace> cex = comp_rr_form(c, bound, nullptr, &accumulated);
    if (cex) return cex;
    accumulated.add(c);
    if (opt_.observer) opt_.observer->on_pn_equivalent_clause(c, bound, init_);
  }
}

Verdict mc_crr(const TransitionSystem& ts, int n, const CheckOptions& opt) {
  if (n < 1) throw StructureError("bound must be at least 1");
  Verdict v;
  v.bound = n;
  CrrSession session(ts, opt);
  Trace collapsed;
  std::vector<Assignment> seen_states;

  try {
    for (int k = 0; k < n; ++k) {
      CnfFormula no_constraints;
      std::optional<InputPair> pair = session.pick_input_pair(no_constraints, nullptr);
      if (!pair) {
        // No initial input pair at all: the property holds vacuously.
        v.kind = Verdict::Kind::kHoldsBounded;
        v.stats = session.stats();
        return v;
      }
      Assignment next = ts.successor(pair->state, pair->input);
      if (!ts.state_is_good(next)) {
        collapsed.steps.push_back(*pair);
        auto cex = truncate_to_counterexample(ts, collapsed);
        v.kind = Verdict::Kind::kCounterexample;
        v.cex = cex ? *cex : collapsed;
        v.stats = session.stats();
        return v;
      }
      Clause protect = session.excluding_clause(*pair);
      std::optional<Trace> suffix = session.constr_time_frame(protect, n - k);
      if (suffix) {
        Trace full = collapsed;
        for (InputPair& p : suffix->steps) full.steps.push_back(std::move(p));
        auto cex = truncate_to_counterexample(ts, full);
        if (!cex)
          throw StructureError("internal: assembled trace does not replay to a counterexample");
        v.kind = Verdict::Kind::kCounterexample;
        v.cex = *cex;
        v.stats = session.stats();
        return v;
      }
      collapsed.steps.push_back(*pair);
      seen_states.push_back(pair->state);
      ++session.stats().frames_collapsed;
      for (size_t i = 0; i < seen_states.size(); ++i) {
        if (seen_states[i] == next) {
          // The forced trace closed a loop of good states; no longer trace
          // can reach anything new.
          v.kind = Verdict::Kind::kHoldsByLoop;
          v.loop_index = static_cast<int>(i);
          v.stats = session.stats();
          return v;
        }
      }
      session.reroot(next);
    }
    v.kind = Verdict::Kind::kHoldsBounded;
    v.stats = session.stats();
    return v;
  } catch (const ResourceOutError& e) {
    v.kind = Verdict::Kind::kResourceOut;
    v.phase = e.phase;
    v.stats = session.stats();
    return v;
  }
}

std::vector<CnfFormula> range_reduction_chain(const TransitionSystem& ts, const Clause& c, int n,
                                              const CheckOptions& opt) {
  CrrSession session(ts, opt);
  RangeReductionState rr = session.make_rr_state(c, n);
  std::vector<CnfFormula> out;
  for (int j = 0; j < n; ++j) {
    rr.h[static_cast<size_t>(j) + 1] = session.reduction_formula(rr, j);
    out.push_back(rr.h[static_cast<size_t>(j) + 1]);
  }
  return out;
}

}  // namespace crr
