#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "crr/cnf.hpp"
#include "crr/solver.hpp"

namespace crr {

// Partial quantifier elimination instance: find H over the free variables
// with H ∧ ∃W[G] ≡ ∃W[F ∧ G] ("take F out of the scope of quantifiers").
struct PqeProblem {
  CnfFormula f;
  CnfFormula g;
  std::vector<Var> quantified;  // W
  std::vector<Var> free_vars;

  void validate() const;
};

struct PqeOptions {
  uint64_t seed = 1;
  int64_t conflict_budget = kDefaultConflictBudget;
  // Hard cap on enumeration rounds; 0 derives one from the free-variable
  // count. Exhaustion is reported, never silently truncated.
  uint64_t max_rounds = 0;
  double wall_budget_secs = 0;  // 0 = unlimited
};

struct PqeStats {
  uint64_t rounds = 0;
  uint64_t solution_points = 0;  // enumerated points kept satisfiable
  uint64_t blocked_points = 0;   // points that produced solution clauses
  uint64_t sat_calls = 0;
};

struct PqeSolution {
  CnfFormula h;
  // Not certified noise-free. The empty solution is trivially noise-free;
  // anything else from this engine may contain noise.
  bool noisy = false;
  bool resource_out = false;  // partial h is unusable when set
  PqeStats stats;
};

// Enumerate-and-generalize solver. Candidate free-variable points come from
// models of G ∧ ¬F, so only points whose G-witnesses can violate F are ever
// examined; each unsatisfiable point yields a solution clause generalized
// from the failed assumptions.
PqeSolution take_out(const PqeProblem& p, const PqeOptions& opt = {});

// Quantifier elimination via the same engine: taking G out of ∃W[G ∧ true]
// leaves H ≡ ∃W[G]. Throws ResourceOutError when the budget runs out.
CnfFormula qe(const CnfFormula& g, std::span<const Var> quantified,
              std::span<const Var> free_vars, const PqeOptions& opt = {});

struct ExpansionStep {
  Clause before;
  Lit added;
};

// Widens C with literals whose opposite-polarity extension is implied by T;
// taking the widened clause out of ∃W[C ∧ T] is equivalent to taking out C.
// Candidates are tried in ascending variable order, positive polarity first,
// repeatedly until a fixpoint.
Clause expand_clause(const Clause& c, const CnfFormula& t, std::span<const Var> candidates,
                     const PqeOptions& opt = {}, std::vector<ExpansionStep>* trace = nullptr);

// A clause of a solution is noise-free when no extension of it over the
// remaining free variables is implied by G; equivalently, every complete
// free assignment falsifying it has a W-extension satisfying G.
bool is_noise_free_clause(const Clause& c, const CnfFormula& g, std::span<const Var> quantified,
                          std::span<const Var> free_vars, const PqeOptions& opt = {});

// Truth-table oracle: the unique noise-free solution, one maximal blocking
// clause per point that is in the range of G but not of F ∧ G. Refuses
// instances beyond oracle scale.
PqeSolution brute_force_pqe(const PqeProblem& p);

// Debug interchange: paired DIMACS files plus a variable sidecar with one
// "v <id> <role> <frame>" line per variable, role being "free" or "quant"
// and frame the pool frame (-1 when untagged).
void pqe_export(const PqeProblem& p, std::ostream& f_os, std::ostream& g_os, std::ostream& vars_os,
                const VariablePool* pool = nullptr);
PqeProblem pqe_import(std::istream& f_is, std::istream& g_is, std::istream& vars_is);

}  // namespace crr
