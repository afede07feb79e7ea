#include <doctest.h>

#include <random>
#include <sstream>

#include "crr/cnf.hpp"
#include "crr/dimacs.hpp"
#include "support/oracles.hpp"

using namespace crr;

namespace {

VariablePool pool_of(int n) {
  VariablePool p;
  for (int i = 0; i < n; ++i) p.fresh(VarRole::kState);
  return p;
}

std::vector<Var> var_list(int n) {
  std::vector<Var> out;
  for (Var v = 1; v <= n; ++v) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("clause construction sorts, dedups and rejects tautologies") {
  Lit a = Lit::positive(1), b = Lit::positive(2);
  Clause c({b, a, a});
  CHECK(c.size() == 2);
  CHECK(c.lits()[0] == a);
  CHECK(c.lits()[1] == b);
  CHECK(c.contains(a));
  CHECK(!c.contains(~a));
  CHECK_THROWS_AS(Clause({a, ~a}), StructureError);
  CHECK(Clause{}.empty());
  CHECK(Clause({a, b}) == Clause({b, a}));
}

TEST_CASE("assignment basics") {
  Assignment m;
  m.set(3, true);
  m.set(1, false);
  CHECK(*m.value(3));
  CHECK(!*m.value(1));
  CHECK(!m.value(2).has_value());
  Var vars[] = {1, 3};
  CHECK(m.complete_over(vars));
  Var more[] = {1, 2, 3};
  CHECK(!m.complete_over(more));
  CHECK(m.cube() == std::vector<Lit>{Lit::negative(1), Lit::positive(3)});
}

TEST_CASE("evaluate is three-valued") {
  Lit a = Lit::positive(1), b = Lit::positive(2);
  CnfFormula empty;
  Assignment any;
  CHECK(evaluate(empty, any) == Ternary::kTrue);

  CnfFormula f;
  f.add(Clause({a, b}));
  Assignment both_false;
  both_false.set(1, false);
  both_false.set(2, false);
  CHECK(evaluate(f, both_false) == Ternary::kFalse);

  CnfFormula g;
  g.add(Clause({a, b}));
  g.add(Clause({~a}));
  Assignment only_a;
  only_a.set(1, false);
  CHECK(evaluate(g, only_a) == Ternary::kUndetermined);
}

TEST_CASE("formula storage dedups and validates against the pool") {
  VariablePool pool = pool_of(2);
  CnfFormula f(&pool);
  f.add(Clause({Lit::positive(1)}));
  f.add(Clause({Lit::positive(1)}));
  CHECK(f.size() == 1);
  CHECK_THROWS_AS(f.add(Clause({Lit::positive(9)})), StructureError);
}

TEST_CASE("rename_formula preserves structure and rejects bad maps") {
  Lit a = Lit::positive(1), b = Lit::positive(2);
  CnfFormula f;
  f.add(Clause({a, ~b}));

  std::unordered_map<Var, Var> identity{{1, 1}, {2, 2}};
  CHECK(rename_formula(f, identity) == f);

  std::unordered_map<Var, Var> shift{{1, 5}, {2, 6}};
  CnfFormula g = rename_formula(f, shift);
  CHECK(g.clauses()[0] == Clause({Lit::positive(5), Lit::negative(6)}));

  std::unordered_map<Var, Var> merge{{1, 7}, {2, 7}};
  CHECK_THROWS_AS(rename_formula(f, merge), StructureError);
  std::unordered_map<Var, Var> partial{{1, 5}};
  CHECK_THROWS_AS(rename_formula(f, partial), StructureError);
}

TEST_CASE("double renaming composes to the direct renaming") {
  std::mt19937_64 rng(7);
  std::vector<Var> vars = var_list(5);
  CnfFormula f = test::random_cnf(rng, vars, 8);
  std::unordered_map<Var, Var> first, second, direct;
  for (Var v = 1; v <= 5; ++v) {
    first[v] = v + 10;
    second[v + 10] = v + 20;
    direct[v] = v + 20;
  }
  CHECK(rename_formula(rename_formula(f, first), second) == rename_formula(f, direct));
}

TEST_CASE("renaming preserves the model count") {
  std::mt19937_64 rng(11);
  std::vector<Var> vars = var_list(6);
  std::vector<Var> renamed_vars;
  std::unordered_map<Var, Var> map;
  for (Var v = 1; v <= 6; ++v) {
    map[v] = v + 6;
    renamed_vars.push_back(v + 6);
  }
  for (int round = 0; round < 20; ++round) {
    CnfFormula f = test::random_cnf(rng, vars, 10);
    CnfFormula g = rename_formula(f, map);
    size_t count_f = 0, count_g = 0;
    for (const Assignment& a : test::all_points(vars))
      if (evaluate(f, a) == Ternary::kTrue) ++count_f;
    for (const Assignment& a : test::all_points(renamed_vars))
      if (evaluate(g, a) == Ternary::kTrue) ++count_g;
    CHECK(count_f == count_g);
  }
}

TEST_CASE("negate_to_cnf on units and on true") {
  VariablePool pool = pool_of(1);
  CnfFormula f(&pool);
  f.add(Clause({Lit::positive(1)}));

  VariablePool scratch = pool;
  CnfFormula neg = negate_to_cnf(f, scratch);
  std::vector<Var> onto{1};
  std::vector<Var> aux;
  for (Var v = 2; v <= scratch.size(); ++v) aux.push_back(v);
  CHECK(test::projected_models(neg, onto, aux) == std::set<uint64_t>{0});  // exactly z = 0

  CnfFormula truth;
  VariablePool scratch2 = pool;
  CnfFormula falsum = negate_to_cnf(truth, scratch2);
  bool has_empty = false;
  for (const Clause& c : falsum.clauses()) has_empty |= c.empty();
  CHECK(has_empty);
}

TEST_CASE("negate_to_cnf projects to the exact complement") {
  Lit a = Lit::positive(1), b = Lit::positive(2);
  CnfFormula f;
  f.add(Clause({a, b}));
  f.add(Clause({~a, ~b}));
  VariablePool pool = pool_of(2);
  CnfFormula neg = negate_to_cnf(f, pool);
  std::vector<Var> onto{1, 2};
  std::vector<Var> aux;
  for (Var v = 3; v <= pool.size(); ++v) aux.push_back(v);
  CHECK(test::projected_models(neg, onto, aux) == std::set<uint64_t>{0b00, 0b11});
}

TEST_CASE("negation duality over random formulas") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 30; ++round) {
    int n = 3 + static_cast<int>(rng() % 10);  // up to 12 original variables
    std::vector<Var> vars = var_list(n);
    CnfFormula f = test::random_cnf(rng, vars, 2 * n);
    VariablePool pool = pool_of(n);
    CnfFormula neg = negate_to_cnf(f, pool);
    for (const Assignment& a : test::all_points(vars)) {
      bool f_true = evaluate(f, a) == Ternary::kTrue;
      // The selectors are functionally determined: one per clause of f,
      // true exactly when that clause is falsified.
      Assignment full = a;
      for (size_t i = 0; i < f.size(); ++i)
        full.set(static_cast<Var>(n) + static_cast<Var>(i) + 1,
                 evaluate(f.clauses()[i], a) == Ternary::kFalse);
      bool neg_true = evaluate(neg, full) == Ternary::kTrue;
      CHECK(f_true == !neg_true);
    }
  }
}

TEST_CASE("blocking clause and cube are literal-wise negations of each other") {
  Assignment a;
  a.set(1, true);
  a.set(2, false);
  std::vector<Var> vars{1, 2};
  Clause block = blocking_clause(a, vars);
  CHECK(block == Clause({Lit::negative(1), Lit::positive(2)}));
  CnfFormula cube = cube_formula(a, vars);
  CHECK(evaluate(cube, a) == Ternary::kTrue);
  CHECK(evaluate(block, a) == Ternary::kFalse);
}

TEST_CASE("dimacs round trip") {
  std::mt19937_64 rng(5);
  std::vector<Var> vars = var_list(6);
  CnfFormula f = test::random_cnf(rng, vars, 12);
  std::string text = to_dimacs(f, 6);
  DimacsProblem back = read_dimacs(text);
  CHECK(back.formula == f);
  CHECK(back.num_vars == 6);

  CHECK_THROWS_AS(read_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(read_dimacs("1 0\n"), ParseError);
  CHECK_THROWS_AS(read_dimacs("p cnf 2 1\n1 2\n"), ParseError);
}
