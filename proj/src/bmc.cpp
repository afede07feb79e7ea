#include "crr/bmc.hpp"

namespace crr {

Verdict bmc(const TransitionSystem& ts, int n, const CheckOptions& opt) {
  if (n < 1) throw StructureError("bound must be at least 1");
  Verdict v;
  v.bound = n;
  Unrolling u(ts);
  CnfFormula unrolled = ts.init;
  for (int depth = 1; depth <= n; ++depth) {
    unrolled.add_all(u.t_frame(depth - 1));
    Solver s(opt.seed);
    s.set_conflict_budget(opt.conflict_budget);
    s.ensure_vars(static_cast<Var>(u.pool().size()));
    s.add_formula(unrolled);
    s.add_formula(u.prop_bad_at(depth));
    ++v.stats.sat_calls;
    SolveStatus st = s.solve();
    if (st == SolveStatus::kResourceOut) {
      v.kind = Verdict::Kind::kResourceOut;
      v.phase = "bmc depth " + std::to_string(depth);
      return v;
    }
    if (st == SolveStatus::kSat) {
      Trace t;
      for (int j = 0; j < depth; ++j) {
        std::span<const Var> s_j = u.state_vars(j);
        std::span<const Var> x_j = u.input_vars(j);
        InputPair p{s.model(s_j), s.model(x_j)};
        // Normalize onto the base variables so replay helpers apply.
        Assignment state, input;
        for (size_t i = 0; i < ts.state_vars.size(); ++i)
          state.set(ts.state_vars[i], *p.state.value(s_j[i]));
        for (size_t i = 0; i < ts.input_vars.size(); ++i)
          input.set(ts.input_vars[i], *p.input.value(x_j[i]));
        t.steps.push_back(InputPair{std::move(state), std::move(input)});
      }
      v.kind = Verdict::Kind::kCounterexample;
      v.cex = t;
      return v;
    }
  }
  v.kind = Verdict::Kind::kHoldsBounded;
  return v;
}

}  // namespace crr
