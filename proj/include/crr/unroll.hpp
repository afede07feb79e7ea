#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "crr/transition_system.hpp"

namespace crr {

// Time-frame instantiation of a transition system. Frame 0 reuses the base
// variables; frame j's next-state variables are frame j+1's state variables.
// Frame copies are cached, so repeated unrolling is idempotent.
class Unrolling {
 public:
  explicit Unrolling(const TransitionSystem& ts);

  const TransitionSystem& system() const { return *ts_; }
  VariablePool& pool() { return pool_; }
  const VariablePool& pool() const { return pool_; }

  // T renamed into frame j, i.e. over (S_j, X_j, Y_j, S_{j+1}).
  const CnfFormula& t_frame(int j);

  std::span<const Var> state_vars(int j);
  std::span<const Var> input_vars(int j);

  // Renames a formula over base state variables S into frame j.
  CnfFormula state_formula_at(const CnfFormula& f, int j);
  Clause state_clause_at(const Clause& c, int j);
  // Same, for formulas over S ∪ X (initial-frame constraints).
  CnfFormula frame0_formula_at(const CnfFormula& f, int j);
  Clause input_clause_at(const Clause& c, int j);

  // Property formulas instantiated at frame j (cone auxiliaries get
  // frame-private copies).
  const CnfFormula& prop_good_at(int j);
  const CnfFormula& prop_bad_at(int j);

  // All variables belonging to frames 0..j except frame (j+1) state
  // variables; the quantified set for reduction-formula computations.
  std::vector<Var> quantified_through(int j);

  int frames_built() const { return static_cast<int>(t_frames_.size()); }

 private:
  void build_up_to(int j);
  const std::unordered_map<Var, Var>& frame_map(int j);

  const TransitionSystem* ts_;
  VariablePool pool_;
  std::vector<std::vector<Var>> frame_state_vars_;           // [j] = S_j
  std::vector<std::vector<Var>> frame_input_vars_;           // [j] = X_j
  std::vector<std::unordered_map<Var, Var>> frame_maps_;     // base var -> frame-j var
  std::vector<CnfFormula> t_frames_;
  std::vector<CnfFormula> prop_good_frames_;
  std::vector<CnfFormula> prop_bad_frames_;
};

// The constrained unrolled formula I ∧ H_0 ∧ T_0 ∧ ... ∧ H_{i-1} ∧ T_{i-1},
// with H_0 given over S ∪ X and later entries over S, renamed frame-correctly.
// For i = 0 this is I alone.
CnfFormula build_phi(Unrolling& u, int i, const CnfFormula& init,
                     std::span<const CnfFormula> h_formulas);

}  // namespace crr
