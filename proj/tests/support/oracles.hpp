// Enumeration-based oracles for the test suites. Everything here decides by
// brute force (truth tables, explicit state-graph search), independent of
// the solver-backed implementation paths it cross-checks.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "crr/bmc.hpp"
#include "crr/checker.hpp"
#include "crr/pqe.hpp"
#include "crr/transition_system.hpp"

namespace crr::test {

// All assignments over `vars`, in mask order.
inline std::vector<Assignment> all_points(std::span<const Var> vars) {
  std::vector<Assignment> out;
  const uint64_t combos = uint64_t{1} << vars.size();
  for (uint64_t mask = 0; mask < combos; ++mask) {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i) a.set(vars[i], (mask >> i) & 1);
    out.push_back(std::move(a));
  }
  return out;
}

// Does some extension of `base` over `ext_vars` make f true?
inline bool exists_extension(const CnfFormula& f, const Assignment& base,
                             std::span<const Var> ext_vars) {
  const uint64_t combos = uint64_t{1} << ext_vars.size();
  for (uint64_t mask = 0; mask < combos; ++mask) {
    Assignment a = base;
    for (size_t i = 0; i < ext_vars.size(); ++i) a.set(ext_vars[i], (mask >> i) & 1);
    if (evaluate(f, a) == Ternary::kTrue) return true;
  }
  return false;
}

inline bool exists_extension2(const CnfFormula& f, const CnfFormula& g, const Assignment& base,
                              std::span<const Var> ext_vars) {
  const uint64_t combos = uint64_t{1} << ext_vars.size();
  for (uint64_t mask = 0; mask < combos; ++mask) {
    Assignment a = base;
    for (size_t i = 0; i < ext_vars.size(); ++i) a.set(ext_vars[i], (mask >> i) & 1);
    if (evaluate(f, a) == Ternary::kTrue && evaluate(g, a) == Ternary::kTrue) return true;
  }
  return false;
}

// Satisfying points of f projected onto `onto`, existentially extending over
// `aux` (every variable of f must lie in onto ∪ aux).
inline std::set<uint64_t> projected_models(const CnfFormula& f, std::span<const Var> onto,
                                           std::span<const Var> aux) {
  std::set<uint64_t> keys;
  const uint64_t combos = uint64_t{1} << onto.size();
  for (uint64_t mask = 0; mask < combos; ++mask) {
    Assignment a;
    for (size_t i = 0; i < onto.size(); ++i) a.set(onto[i], (mask >> i) & 1);
    if (exists_extension(f, a, aux)) keys.insert(mask);
  }
  return keys;
}

// All-solutions projection via the solver (for formulas whose auxiliary
// count rules out plain enumeration).
inline std::set<uint64_t> sat_projected_models(const CnfFormula& f, std::span<const Var> onto,
                                               Var universe) {
  Solver s;
  s.ensure_vars(universe);
  s.add_formula(f);
  std::set<uint64_t> keys;
  while (s.solve() == SolveStatus::kSat) {
    Assignment point = s.model(onto);
    uint64_t key = 0;
    for (size_t i = 0; i < onto.size(); ++i)
      if (*point.value(onto[i])) key |= uint64_t{1} << i;
    keys.insert(key);
    s.add_clause(blocking_clause(point, onto));
  }
  return keys;
}

// PQE solution contract by truth table: h ∧ ∃W[g] ≡ ∃W[f ∧ g].
inline bool pqe_solution_ok(const PqeProblem& p, const CnfFormula& h) {
  for (const Assignment& z : all_points(p.free_vars)) {
    bool lhs = evaluate(h, z) == Ternary::kTrue && exists_extension(p.g, z, p.quantified);
    bool rhs = exists_extension2(p.f, p.g, z, p.quantified);
    if (lhs != rhs) return false;
  }
  return true;
}

// ---- State-space oracles ------------------------------------------------

inline uint64_t state_key(const TransitionSystem& ts, const Assignment& state) {
  uint64_t key = 0;
  for (size_t i = 0; i < ts.state_vars.size(); ++i)
    if (*state.value(ts.state_vars[i])) key |= uint64_t{1} << i;
  return key;
}

inline Assignment state_of_key(const TransitionSystem& ts, uint64_t key) {
  Assignment a;
  for (size_t i = 0; i < ts.state_vars.size(); ++i) a.set(ts.state_vars[i], (key >> i) & 1);
  return a;
}

inline std::vector<Assignment> all_inputs(const TransitionSystem& ts) {
  return all_points(ts.input_vars);
}

inline std::vector<uint64_t> initial_state_keys(const TransitionSystem& ts) {
  std::vector<uint64_t> out;
  const uint64_t combos = uint64_t{1} << ts.state_vars.size();
  for (uint64_t mask = 0; mask < combos; ++mask)
    if (evaluate(ts.init, state_of_key(ts, mask)) == Ternary::kTrue) out.push_back(mask);
  return out;
}

// Initial keys of a session whose root moved: states satisfying `init`.
inline std::vector<uint64_t> keys_satisfying(const TransitionSystem& ts, const CnfFormula& init) {
  std::vector<uint64_t> out;
  const uint64_t combos = uint64_t{1} << ts.state_vars.size();
  for (uint64_t mask = 0; mask < combos; ++mask)
    if (evaluate(init, state_of_key(ts, mask)) == Ternary::kTrue) out.push_back(mask);
  return out;
}

inline uint64_t successor_key(const TransitionSystem& ts, uint64_t key, const Assignment& input) {
  return state_key(ts, ts.successor(state_of_key(ts, key), input));
}

// States reachable in exactly 0..n transitions from the given roots.
inline std::vector<std::set<uint64_t>> reachable_layers_from(const TransitionSystem& ts,
                                                             std::span<const uint64_t> roots,
                                                             int n) {
  std::vector<std::set<uint64_t>> layers(static_cast<size_t>(n) + 1);
  layers[0].insert(roots.begin(), roots.end());
  std::vector<Assignment> inputs = all_points(ts.input_vars);
  for (int i = 0; i < n; ++i)
    for (uint64_t k : layers[static_cast<size_t>(i)])
      for (const Assignment& x : inputs)
        layers[static_cast<size_t>(i) + 1].insert(successor_key(ts, k, x));
  return layers;
}

// States reachable in exactly 0..n transitions.
inline std::vector<std::set<uint64_t>> reachable_layers(const TransitionSystem& ts, int n) {
  std::vector<std::set<uint64_t>> layers(static_cast<size_t>(n) + 1);
  for (uint64_t k : initial_state_keys(ts)) layers[0].insert(k);
  std::vector<Assignment> inputs = all_inputs(ts);
  for (int i = 0; i < n; ++i)
    for (uint64_t k : layers[static_cast<size_t>(i)])
      for (const Assignment& x : inputs)
        layers[static_cast<size_t>(i) + 1].insert(successor_key(ts, k, x));
  return layers;
}

// Length of a shortest counterexample, or nothing if none within n.
inline std::optional<int> shortest_cex_length(const TransitionSystem& ts, int n) {
  std::set<uint64_t> layer;
  for (uint64_t k : initial_state_keys(ts)) layer.insert(k);
  std::vector<Assignment> inputs = all_inputs(ts);
  for (int depth = 1; depth <= n; ++depth) {
    std::set<uint64_t> next;
    for (uint64_t k : layer)
      for (const Assignment& x : inputs) {
        uint64_t nk = successor_key(ts, k, x);
        if (!ts.state_is_good(state_of_key(ts, nk))) return depth;
        next.insert(nk);
      }
    layer = std::move(next);  // all good, keep walking
  }
  return std::nullopt;
}

inline bool pair_satisfies_clause(const TransitionSystem& ts, uint64_t state_key_value,
                                  const Assignment& input, const Clause& c) {
  Assignment a = state_of_key(ts, state_key_value);
  a.merge(input);
  return evaluate(c, a) != Ternary::kFalse;
}

// Per-frame falsified sets of the semantic reduction formulas for clause c:
// states reachable in exactly i transitions only by traces whose first input
// pair falsifies c. Index 0 is unused.
inline std::vector<std::set<uint64_t>> semantic_reduction_sets(const TransitionSystem& ts,
                                                               const Clause& c, int n) {
  std::vector<Assignment> inputs = all_inputs(ts);
  std::set<uint64_t> via_excluded, via_allowed;
  for (uint64_t k : initial_state_keys(ts)) {
    for (const Assignment& x : inputs) {
      uint64_t nk = successor_key(ts, k, x);
      if (pair_satisfies_clause(ts, k, x, c)) via_allowed.insert(nk);
      else via_excluded.insert(nk);
    }
  }
  std::vector<std::set<uint64_t>> falsified(static_cast<size_t>(n) + 1);
  auto record = [&](int frame) {
    for (uint64_t k : via_excluded)
      if (!via_allowed.count(k)) falsified[static_cast<size_t>(frame)].insert(k);
  };
  record(1);
  for (int i = 2; i <= n; ++i) {
    auto step = [&](const std::set<uint64_t>& from) {
      std::set<uint64_t> to;
      for (uint64_t k : from)
        for (const Assignment& x : inputs) to.insert(successor_key(ts, k, x));
      return to;
    };
    via_excluded = step(via_excluded);
    via_allowed = step(via_allowed);
    record(i);
  }
  return falsified;
}

// Does a counterexample of length ≤ n exist, restricted to traces whose
// first input pair satisfies the given formula and clause (either may be
// null for "no restriction")?
inline bool exists_cex_up_to(const TransitionSystem& ts, int n,
                             const CnfFormula* first_pair_formula,
                             const Clause* first_pair_clause) {
  std::vector<Assignment> inputs = all_inputs(ts);
  std::set<uint64_t> good_layer;
  for (uint64_t k : initial_state_keys(ts)) good_layer.insert(k);
  for (int depth = 1; depth <= n; ++depth) {
    std::set<uint64_t> next;
    for (uint64_t k : good_layer) {
      for (const Assignment& x : inputs) {
        if (depth == 1) {
          Assignment merged = state_of_key(ts, k);
          merged.merge(x);
          if (first_pair_formula && evaluate(*first_pair_formula, merged) == Ternary::kFalse)
            continue;
          if (first_pair_clause && evaluate(*first_pair_clause, merged) == Ternary::kFalse)
            continue;
        }
        uint64_t nk = successor_key(ts, k, x);
        if (!ts.state_is_good(state_of_key(ts, nk))) return true;
        next.insert(nk);
      }
    }
    good_layer = std::move(next);
  }
  return false;
}

// ---- Random generators ---------------------------------------------------

inline Clause random_clause(std::mt19937_64& rng, std::span<const Var> vars, int max_width) {
  std::vector<Var> pool_vars(vars.begin(), vars.end());
  for (size_t i = pool_vars.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng() % (i + 1));
    std::swap(pool_vars[i], pool_vars[j]);
  }
  int width = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_width));
  width = std::min<int>(width, static_cast<int>(pool_vars.size()));
  std::vector<Lit> lits;
  for (int i = 0; i < width; ++i)
    lits.push_back(Lit(pool_vars[static_cast<size_t>(i)], (rng() & 1) != 0));
  return Clause(lits);
}

inline CnfFormula random_cnf(std::mt19937_64& rng, std::span<const Var> vars, int num_clauses,
                             int max_width = 3) {
  CnfFormula f;
  for (int i = 0; i < num_clauses; ++i) f.add(random_clause(rng, vars, max_width));
  return f;
}

struct RandomPqeInstance {
  PqeProblem problem;
  VariablePool pool;
};

inline RandomPqeInstance random_pqe_instance(uint64_t seed, int max_free = 8, int max_quant = 8) {
  std::mt19937_64 rng(seed);
  RandomPqeInstance inst;
  int nf = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_free - 1));
  int nw = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_quant - 1));
  for (int i = 0; i < nf; ++i) inst.problem.free_vars.push_back(inst.pool.fresh(VarRole::kState));
  for (int i = 0; i < nw; ++i) inst.problem.quantified.push_back(inst.pool.fresh(VarRole::kInternal));
  std::vector<Var> all = inst.problem.free_vars;
  all.insert(all.end(), inst.problem.quantified.begin(), inst.problem.quantified.end());
  int g_clauses = 2 + static_cast<int>(rng() % static_cast<uint64_t>(2 * (nf + nw)));
  inst.problem.g = random_cnf(rng, all, g_clauses);
  int f_clauses = 1 + static_cast<int>(rng() % 2);
  inst.problem.f = random_cnf(rng, all, f_clauses);
  return inst;
}

struct CircuitPqeInstance {
  VariablePool pool;
  CnfFormula t;
  std::vector<Var> inputs;
  std::vector<Var> outputs;
  std::vector<Var> quantified;  // inputs plus internal wires, minus outputs
};

// Seeded random combinational circuit encoded to CNF, with the last two
// wires designated as outputs.
inline CircuitPqeInstance random_circuit_instance(uint64_t seed, int n_in = 4, int n_gates = 5) {
  std::mt19937_64 rng(seed);
  CircuitPqeInstance inst;
  Circuit circ;
  std::vector<Var> wires;
  for (int i = 0; i < n_in; ++i) {
    Var v = inst.pool.fresh(VarRole::kInput);
    circ.add_input(v);
    inst.inputs.push_back(v);
    wires.push_back(v);
  }
  for (int g = 0; g < n_gates; ++g) {
    AigLit a = aig_of(wires[rng() % wires.size()], (rng() & 1) != 0);
    AigLit b = aig_of(wires[rng() % wires.size()], (rng() & 1) != 0);
    Var out = inst.pool.fresh(VarRole::kInternal);
    circ.add_gate(out, a, b);
    wires.push_back(out);
  }
  inst.t = tseitin_encode(circ);
  inst.outputs = {wires[wires.size() - 1], wires[wires.size() - 2]};
  for (Var v = 1; v <= inst.pool.size(); ++v)
    if (std::find(inst.outputs.begin(), inst.outputs.end(), v) == inst.outputs.end())
      inst.quantified.push_back(v);
  return inst;
}

}  // namespace crr::test
