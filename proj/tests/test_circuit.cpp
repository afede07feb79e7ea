#include <doctest.h>

#include <random>

#include "crr/circuit.hpp"
#include "support/oracles.hpp"

using namespace crr;

namespace {

// Random acyclic circuit over `n_in` inputs; operands come from anything
// already defined.
Circuit random_circuit(VariablePool& pool, std::mt19937_64& rng, int n_in, int n_gates) {
  Circuit c;
  std::vector<Var> wires;
  for (int i = 0; i < n_in; ++i) {
    Var v = pool.fresh(VarRole::kInput);
    c.add_input(v);
    wires.push_back(v);
  }
  for (int i = 0; i < n_gates; ++i) {
    AigLit a = aig_of(wires[rng() % wires.size()], (rng() & 1) != 0);
    AigLit b = aig_of(wires[rng() % wires.size()], (rng() & 1) != 0);
    Var out = pool.fresh(VarRole::kInternal);
    c.add_gate(out, a, b);
    wires.push_back(out);
  }
  return c;
}

}  // namespace

TEST_CASE("single AND gate gives the three standard clauses") {
  VariablePool pool;
  Var a = pool.fresh(VarRole::kInput);
  Var b = pool.fresh(VarRole::kInput);
  Var z = pool.fresh(VarRole::kInternal);
  Circuit c;
  c.add_input(a);
  c.add_input(b);
  c.add_gate(z, aig_of(a), aig_of(b));

  CnfFormula f = tseitin_encode(c);
  CnfFormula expected;
  expected.add(Clause({Lit::negative(z), Lit::positive(a)}));
  expected.add(Clause({Lit::negative(z), Lit::positive(b)}));
  expected.add(Clause({Lit::positive(z), Lit::negative(a), Lit::negative(b)}));
  REQUIRE(f.size() == 3);
  for (const Clause& cl : expected.clauses())
    CHECK(std::find(f.clauses().begin(), f.clauses().end(), cl) != f.clauses().end());
}

TEST_CASE("empty circuit encodes to the empty CNF") {
  Circuit c;
  c.add_input(1);
  CHECK(tseitin_encode(c).empty());
}

TEST_CASE("two-gate NAND projects to the NAND truth table") {
  VariablePool pool;
  Var a = pool.fresh(VarRole::kInput);
  Var b = pool.fresh(VarRole::kInput);
  Var w = pool.fresh(VarRole::kInternal);
  Var z = pool.fresh(VarRole::kInternal);
  Circuit c;
  c.add_input(a);
  c.add_input(b);
  c.add_gate(w, aig_of(a), aig_of(b));
  c.add_gate(z, aig_not(aig_of(w)), kAigTrue);  // z = ~w

  CnfFormula f = tseitin_encode(c);
  std::vector<Var> onto{a, b, z};
  std::vector<Var> aux{w};
  // keys are (a | b<<1 | z<<2)
  std::set<uint64_t> expected{0b100, 0b101, 0b110, 0b011};
  CHECK(test::projected_models(f, onto, aux) == expected);
}

TEST_CASE("tseitin soundness: unique extension matching simulation") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 25; ++round) {
    VariablePool pool;
    int n_in = 2 + static_cast<int>(rng() % 4);
    int n_gates = 1 + static_cast<int>(rng() % 8);
    Circuit c = random_circuit(pool, rng, n_in, n_gates);
    CnfFormula f = tseitin_encode(c);

    std::vector<Var> gate_vars;
    for (const AndGate& g : c.gates()) gate_vars.push_back(g.out);

    for (const Assignment& in : test::all_points(c.inputs())) {
      Assignment sim = c.simulate(in);
      size_t extensions = 0;
      const uint64_t combos = uint64_t{1} << gate_vars.size();
      for (uint64_t mask = 0; mask < combos; ++mask) {
        Assignment a = in;
        for (size_t i = 0; i < gate_vars.size(); ++i) a.set(gate_vars[i], (mask >> i) & 1);
        if (evaluate(f, a) != Ternary::kTrue) continue;
        ++extensions;
        for (Var g : gate_vars) CHECK(*a.value(g) == *sim.value(g));
      }
      CHECK(extensions == 1);
    }
  }
}

TEST_CASE("constant operands fold") {
  VariablePool pool;
  Var a = pool.fresh(VarRole::kInput);
  Var z1 = pool.fresh(VarRole::kInternal);
  Var z2 = pool.fresh(VarRole::kInternal);
  Circuit c;
  c.add_input(a);
  c.add_gate(z1, kAigFalse, aig_of(a));
  c.add_gate(z2, kAigTrue, aig_of(a));
  CnfFormula f = tseitin_encode(c);
  Assignment in;
  in.set(a, true);
  Assignment sim = c.simulate(in);
  CHECK(!*sim.value(z1));
  CHECK(*sim.value(z2));
  // the encoding forces the same values
  std::vector<Var> onto{a, z1, z2};
  std::vector<Var> aux;
  CHECK(test::projected_models(f, onto, aux) == std::set<uint64_t>{0b000, 0b101});
}

TEST_CASE("cyclic circuits and undeclared wires are rejected") {
  Circuit cyc;
  cyc.add_input(1);
  cyc.add_gate(2, aig_of(3), aig_of(1));
  cyc.add_gate(3, aig_of(2), aig_of(1));
  CHECK_THROWS_AS(tseitin_encode(cyc), StructureError);

  Circuit dangle;
  dangle.add_input(1);
  dangle.add_gate(2, aig_of(9), aig_of(1));
  CHECK_THROWS_AS(tseitin_encode(dangle), StructureError);

  Circuit redef;
  redef.add_input(1);
  redef.add_gate(2, aig_of(1), aig_of(1));
  redef.add_gate(2, aig_of(1), kAigTrue);
  CHECK_THROWS_AS(tseitin_encode(redef), StructureError);
}

TEST_CASE("support computes the cone's leaves") {
  VariablePool pool;
  Var a = pool.fresh(VarRole::kInput);
  Var b = pool.fresh(VarRole::kInput);
  Var c_in = pool.fresh(VarRole::kInput);
  Var g1 = pool.fresh(VarRole::kInternal);
  Var g2 = pool.fresh(VarRole::kInternal);
  Circuit c;
  c.add_input(a);
  c.add_input(b);
  c.add_input(c_in);
  c.add_gate(g1, aig_of(a), aig_of(b));
  c.add_gate(g2, aig_of(g1), aig_of(c_in));
  CHECK(c.support(aig_of(g1)) == std::vector<Var>{a, b});
  CHECK(c.support(aig_of(g2)) == std::vector<Var>{a, b, c_in});
  CHECK(c.support(kAigTrue).empty());
}
