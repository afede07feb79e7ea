#include "crr/pqe.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "crr/dimacs.hpp"

namespace crr {

namespace {

Var max_var_of(const PqeProblem& p) {
  Var m = std::max(p.f.max_var(), p.g.max_var());
  for (Var v : p.quantified) m = std::max(m, v);
  for (Var v : p.free_vars) m = std::max(m, v);
  return m;
}

class WallGuard {
 public:
  explicit WallGuard(double secs) : limit_(secs) {}
  bool expired() const {
    if (limit_ <= 0) return false;
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count() > limit_;
  }

 private:
  double limit_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

void PqeProblem::validate() const {
  std::unordered_set<Var> w(quantified.begin(), quantified.end());
  std::unordered_set<Var> free_set(free_vars.begin(), free_vars.end());
  for (Var v : free_vars)
    if (w.count(v))
      throw StructureError("variable " + std::to_string(v) + " both quantified and free");
  auto check = [&](const CnfFormula& formula, const char* which) {
    for (Var v : formula.vars())
      if (!w.count(v) && !free_set.count(v))
        throw StructureError(std::string(which) + " mentions variable " + std::to_string(v) +
                             " outside the declared sets");
  };
  check(f, "F");
  check(g, "G");
}

PqeSolution take_out(const PqeProblem& p, const PqeOptions& opt) {
  p.validate();
  PqeSolution sol;
  WallGuard wall(opt.wall_budget_secs);

  const Var top = max_var_of(p);
  VariablePool scratch;
  while (scratch.size() < top) scratch.fresh(VarRole::kAuxiliary);

  // Candidate enumerator: models of G ∧ ¬F, narrowed as points get decided.
  Solver q1(opt.seed);
  q1.set_conflict_budget(opt.conflict_budget);
  q1.ensure_vars(top);
  q1.add_formula(p.g);
  q1.add_formula(negate_to_cnf(p.f, scratch));

  // Point decider: is F ∧ G satisfiable within the candidate point?
  Solver q2(opt.seed);
  q2.set_conflict_budget(opt.conflict_budget);
  q2.ensure_vars(top);
  q2.add_formula(p.f);
  q2.add_formula(p.g);

  uint64_t round_cap = opt.max_rounds;
  if (round_cap == 0) {
    int shift = std::min<size_t>(p.free_vars.size(), 24);
    round_cap = (uint64_t{1} << (shift + 1)) + 16;
  }

  while (true) {
    if (++sol.stats.rounds > round_cap || wall.expired()) {
      sol.resource_out = true;
      return sol;
    }
    ++sol.stats.sat_calls;
    SolveStatus st = q1.solve();
    if (st == SolveStatus::kResourceOut) {
      sol.resource_out = true;
      return sol;
    }
    if (st == SolveStatus::kUnsat) break;

    Assignment point = q1.model(p.free_vars);
    std::vector<Lit> cube = point.cube();
    ++sol.stats.sat_calls;
    SolveStatus st2 = q2.solve(cube);
    if (st2 == SolveStatus::kResourceOut) {
      sol.resource_out = true;
      return sol;
    }
    if (st2 == SolveStatus::kSat) {
      // The point stays in the solution space; exclude exactly it from the
      // enumeration.
      ++sol.stats.solution_points;
      q1.add_clause(blocking_clause(point, p.free_vars));
    } else {
      // No witness under this point: block the generalized core everywhere.
      ++sol.stats.blocked_points;
      std::vector<Lit> learned;
      for (const Lit& l : q2.failed_assumptions()) learned.push_back(~l);
      Clause h_clause(learned);
      sol.h.add(h_clause);
      q1.add_clause(h_clause);
    }
  }
  sol.noisy = !sol.h.empty();
  return sol;
}

CnfFormula qe(const CnfFormula& g, std::span<const Var> quantified,
              std::span<const Var> free_vars, const PqeOptions& opt) {
  PqeProblem p;
  p.f = g;
  p.quantified.assign(quantified.begin(), quantified.end());
  p.free_vars.assign(free_vars.begin(), free_vars.end());
  PqeSolution sol = take_out(p, opt);
  if (sol.resource_out) throw ResourceOutError("qe");
  return sol.h;
}

Clause expand_clause(const Clause& c, const CnfFormula& t, std::span<const Var> candidates,
                     const PqeOptions& opt, std::vector<ExpansionStep>* trace) {
  Solver s(opt.seed);
  s.set_conflict_budget(opt.conflict_budget);
  Var top = std::max(t.max_var(), c.empty() ? 0 : c.lits().back().var());
  for (Var v : candidates) top = std::max(top, v);
  s.ensure_vars(top);
  s.add_formula(t);

  Clause cur = c;
  std::vector<Lit> assumptions;
  for (const Lit& l : cur.lits()) assumptions.push_back(~l);

  bool changed = true;
  while (changed) {
    changed = false;
    // A literal is addable iff T ∧ ~cur forces its negation; any model of
    // T ∧ ~cur therefore rules out the literals it satisfies, leaving at
    // most one polarity per variable to test.
    SolveStatus st = s.solve(assumptions);
    if (st == SolveStatus::kResourceOut) throw ResourceOutError("expand_clause");
    if (st == SolveStatus::kUnsat) break;  // cur already implied by t
    Assignment model = s.full_model();
    for (Var v : candidates) {
      if (cur.mentions(v)) continue;
      Lit l(v, *model.value(v));  // the polarity the model falsifies
      assumptions.push_back(l);
      SolveStatus st2 = s.solve(assumptions);
      assumptions.pop_back();
      if (st2 == SolveStatus::kResourceOut) throw ResourceOutError("expand_clause");
      if (st2 == SolveStatus::kUnsat) {
        if (trace) trace->push_back(ExpansionStep{cur, l});
        cur = cur.with(l);
        assumptions.push_back(~l);  // the model still falsifies the wider clause
        changed = true;
      }
    }
  }
  return cur;
}

bool is_noise_free_clause(const Clause& c, const CnfFormula& g, std::span<const Var> quantified,
                          std::span<const Var> free_vars, const PqeOptions& opt) {
  (void)quantified;
  std::vector<Var> rest;
  for (Var v : free_vars)
    if (!c.mentions(v)) rest.push_back(v);
  for (const Lit& l : c.lits())
    if (std::find(free_vars.begin(), free_vars.end(), l.var()) == free_vars.end())
      throw StructureError("clause literal outside the free variables");
  if (rest.size() > 24) throw ResourceOutError("is_noise_free_clause enumeration");

  Solver s(opt.seed);
  s.set_conflict_budget(opt.conflict_budget);
  Var top = std::max(g.max_var(), c.empty() ? 0 : c.lits().back().var());
  for (Var v : free_vars) top = std::max(top, v);
  s.ensure_vars(top);
  s.add_formula(g);

  // Every completion of ~C must reach G through some quantified extension;
  // one that cannot marks an extension of C implied by G.
  std::vector<Lit> assumptions;
  for (const Lit& l : c.lits()) assumptions.push_back(~l);
  size_t base = assumptions.size();
  assumptions.resize(base + rest.size());
  const uint64_t combos = uint64_t{1} << rest.size();
  for (uint64_t mask = 0; mask < combos; ++mask) {
    for (size_t i = 0; i < rest.size(); ++i)
      assumptions[base + i] = Lit(rest[i], ((mask >> i) & 1) == 0);
    switch (s.solve(assumptions)) {
      case SolveStatus::kSat: break;
      case SolveStatus::kUnsat: return false;
      case SolveStatus::kResourceOut: throw ResourceOutError("is_noise_free_clause");
    }
  }
  return true;
}

PqeSolution brute_force_pqe(const PqeProblem& p) {
  p.validate();
  if (p.free_vars.size() > 16 || p.quantified.size() > 16 ||
      p.free_vars.size() + p.quantified.size() > 26)
    throw StructureError("brute_force_pqe: instance beyond oracle scale");

  PqeSolution sol;
  const uint64_t z_combos = uint64_t{1} << p.free_vars.size();
  const uint64_t w_combos = uint64_t{1} << p.quantified.size();
  Assignment a;
  for (uint64_t zm = 0; zm < z_combos; ++zm) {
    for (size_t i = 0; i < p.free_vars.size(); ++i) a.set(p.free_vars[i], (zm >> i) & 1);
    bool in_range = false;
    bool in_constrained_range = false;
    for (uint64_t wm = 0; wm < w_combos && !in_constrained_range; ++wm) {
      for (size_t i = 0; i < p.quantified.size(); ++i) a.set(p.quantified[i], (wm >> i) & 1);
      if (evaluate(p.g, a) != Ternary::kTrue) continue;
      in_range = true;
      if (evaluate(p.f, a) == Ternary::kTrue) in_constrained_range = true;
    }
    ++sol.stats.rounds;
    if (in_range && !in_constrained_range) {
      for (size_t i = 0; i < p.free_vars.size(); ++i) a.set(p.free_vars[i], (zm >> i) & 1);
      sol.h.add(blocking_clause(a.project(p.free_vars), p.free_vars));
      ++sol.stats.blocked_points;
    }
  }
  sol.noisy = false;
  return sol;
}

void pqe_export(const PqeProblem& p, std::ostream& f_os, std::ostream& g_os, std::ostream& vars_os,
                const VariablePool* pool) {
  Var top = max_var_of(p);
  write_dimacs(f_os, p.f, top);
  write_dimacs(g_os, p.g, top);
  for (Var v : p.free_vars) {
    int frame = (pool && pool->contains(v)) ? pool->frame(v) : kNoFrame;
    vars_os << "v " << v << " free " << frame << '\n';
  }
  for (Var v : p.quantified) {
    int frame = (pool && pool->contains(v)) ? pool->frame(v) : kNoFrame;
    vars_os << "v " << v << " quant " << frame << '\n';
  }
}

PqeProblem pqe_import(std::istream& f_is, std::istream& g_is, std::istream& vars_is) {
  PqeProblem p;
  p.f = read_dimacs(f_is).formula;
  p.g = read_dimacs(g_is).formula;
  std::string tag;
  while (vars_is >> tag) {
    if (tag != "v") throw ParseError("variable sidecar: expected 'v', got '" + tag + "'");
    Var v;
    std::string role;
    int frame;
    if (!(vars_is >> v >> role >> frame)) throw ParseError("variable sidecar: malformed line");
    if (role == "free") p.free_vars.push_back(v);
    else if (role == "quant") p.quantified.push_back(v);
    else throw ParseError("variable sidecar: unknown role '" + role + "'");
  }
  p.validate();
  return p;
}

}  // namespace crr
