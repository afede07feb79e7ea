#pragma once

#include <span>
#include <vector>

#include "crr/cnf.hpp"

namespace crr {

// AIGER-style edge: 0 = constant false, 1 = constant true, otherwise
// 2*var + sign over pool variables.
using AigLit = uint32_t;

inline constexpr AigLit kAigFalse = 0;
inline constexpr AigLit kAigTrue = 1;

inline AigLit aig_of(Var v, bool negated = false) {
  return static_cast<AigLit>(2 * v + (negated ? 1 : 0));
}
inline bool aig_is_const(AigLit l) { return l < 2; }
inline Var aig_var(AigLit l) { return static_cast<Var>(l >> 1); }
inline bool aig_negated(AigLit l) { return (l & 1) != 0; }
inline AigLit aig_not(AigLit l) { return l ^ 1; }

struct AndGate {
  Var out;
  AigLit a, b;
};

// Combinational AND/NOT circuit over pool variables. Inputs are declared
// wires; every gate output is a distinct non-input variable; gates may be
// listed in any order but must be acyclic.
class Circuit {
 public:
  Circuit() = default;

  void add_input(Var v) { inputs_.push_back(v); }
  void add_gate(Var out, AigLit a, AigLit b) { gates_.push_back(AndGate{out, a, b}); }

  const std::vector<Var>& inputs() const { return inputs_; }
  const std::vector<AndGate>& gates() const { return gates_; }

  // Gates reordered so every operand is defined before use.
  // Throws StructureError on cycles, undeclared wires or redefined outputs.
  std::vector<AndGate> topo_order() const;

  // Variables of the cone feeding `root`, and whether any of them is outside
  // `allowed` (used to reject properties that peek at combinational inputs).
  std::vector<Var> support(AigLit root) const;

  // Evaluates every wire from a complete assignment of the inputs.
  Assignment simulate(const Assignment& input_values) const;
  bool eval(AigLit l, const Assignment& wires) const;

 private:
  std::vector<Var> inputs_;
  std::vector<AndGate> gates_;
};

// Tseitin encoding of the circuit: one auxiliary use of each gate-output
// variable, three clauses per AND gate (fewer when an operand is constant).
// Satisfying assignments restricted to (inputs, gate outputs) are exactly
// the circuit's evaluations.
CnfFormula tseitin_encode(const Circuit& c);

// Clauses for the cone of `root` only, plus nothing else; callers add a unit
// on the root edge to assert its value.
CnfFormula tseitin_cone(const Circuit& c, AigLit root);

}  // namespace crr
