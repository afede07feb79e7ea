#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crr/circuit.hpp"
#include "crr/cnf.hpp"
#include "crr/solver.hpp"

namespace crr {

// Sequential system: a combinational next-state/property circuit over
// current-state variables S and combinational inputs X, with declared
// initial states I(S) and a state property P(S). The transition formula
// `trans` ranges over (S, X, internal wires, S'); `prop_good` / `prop_bad`
// range over S plus the property cone's internal wires, and their
// projections onto S are exactly the good / bad states.
class TransitionSystem {
 public:
  std::string name;

  VariablePool pool;
  std::vector<Var> state_vars;       // S
  std::vector<Var> input_vars;       // X
  std::vector<Var> next_state_vars;  // S', aligned with state_vars

  Circuit circuit;                // all AND gates; inputs = S ∪ X
  std::vector<AigLit> next_lits;  // per latch, the next-state function edge
  AigLit bad_lit = kAigFalse;     // property fails in states where this is 1

  CnfFormula trans;      // T(S, X, Y, S')
  CnfFormula init;       // I(S), a cube in practice
  CnfFormula prop_good;  // property cone + unit asserting the bad edge false
  CnfFormula prop_bad;   // property cone + unit asserting the bad edge true

  int gate_count = 0;

  // Circuit-level evaluation; `state` must be complete over state_vars and
  // `input` over input_vars.
  bool state_is_good(const Assignment& state) const;
  Assignment successor(const Assignment& state, const Assignment& input) const;

  // Checked once at load: no initial state violates the property.
  void check_init_implies_property(int64_t conflict_budget = kDefaultConflictBudget) const;
};

enum class CounterEncoding : uint8_t { kStandardBinary, kSeededPermutation };

// Abstract k-bit counter: one combinational input x; x=0 holds the state,
// x=1 advances to the next code, wrapping from the last value back to the
// initial one; the property holds in states whose value is below d.
struct CounterSpec {
  int bits = 2;                      // k
  int threshold = 1;                 // d, with 0 < d < 2^k
  CounterEncoding encoding = CounterEncoding::kStandardBinary;
  uint64_t permutation_seed = 0;     // used by the seeded-permutation encoding

  void validate() const;
  std::string display_name() const;
};

TransitionSystem abstract_counter(const CounterSpec& spec);

// State codes in value order (code[v] = bit pattern holding value v);
// exposed for tests that need the value map.
std::vector<uint32_t> counter_codes(const CounterSpec& spec);

// ASCII AIGER ("aag") reader, 1.9 subset: inputs, latches with optional
// reset field, a single property given either as one output or one bad
// line. Binary AIGER, justice/fairness and invariant constraints are
// rejected with an error naming the offending line.
TransitionSystem parse_aiger(std::istream& is, const std::string& name = "aiger");
TransitionSystem parse_aiger_text(const std::string& text, const std::string& name = "aiger");
TransitionSystem load_aiger_file(const std::string& path);

// ASCII AIGER writer; byte-deterministic for a given system.
void write_aiger(std::ostream& os, const TransitionSystem& ts);
std::string to_aiger_text(const TransitionSystem& ts);

}  // namespace crr
