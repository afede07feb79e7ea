#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "crr/literals.hpp"

namespace crr {

// A clause is a set of literals over distinct variables, stored sorted by
// variable id so structural comparison is canonical. The empty clause is
// permitted and denotes false. Tautological input (v and ~v together) is a
// caller bug in this workload and is rejected rather than dropped.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::span<const Lit> lits);
  Clause(std::initializer_list<Lit> lits) : Clause(std::span<const Lit>(lits.begin(), lits.size())) {}

  const std::vector<Lit>& lits() const { return lits_; }
  size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }

  bool contains(Lit l) const;
  bool mentions(Var v) const;
  std::optional<Lit> lit_of(Var v) const;

  // Clause extended by one more literal (same construction rules).
  Clause with(Lit l) const;

  bool operator==(const Clause& o) const { return lits_ == o.lits_; }
  bool operator<(const Clause& o) const { return lits_ < o.lits_; }

 private:
  std::vector<Lit> lits_;
};

enum class Ternary : uint8_t { kFalse, kTrue, kUndetermined };

// Total assignment fragment: maps variables to values, tracking which
// variables are defined. A "state" is an Assignment complete over one
// frame's state variables.
class Assignment {
 public:
  Assignment() = default;

  void set(Var v, bool value);
  void unset(Var v);
  std::optional<bool> value(Var v) const;
  bool defined(Var v) const { return value(v).has_value(); }

  bool complete_over(std::span<const Var> vars) const;

  // Literals satisfied by this assignment, ascending by variable id.
  std::vector<Lit> cube() const;
  std::vector<Var> defined_vars() const;

  // Restriction to the given variables (all must be defined).
  Assignment project(std::span<const Var> vars) const;
  void merge(const Assignment& other);

  bool satisfies(Lit l) const;

  bool operator==(const Assignment& o) const;

 private:
  // Dense map keyed by variable id; -1 = undefined.
  std::vector<int8_t> vals_;
};

// CNF formula: a sequence of clauses plus (optionally) the pool that owns the
// variables. The empty formula denotes true. Clause storage is deduplicated.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(const VariablePool* pool) : pool_(pool) {}

  void add(Clause c);
  void add_unit(Lit l) { add(Clause({l})); }
  void add_all(const CnfFormula& other);

  const std::vector<Clause>& clauses() const { return clauses_; }
  size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  const VariablePool* pool() const { return pool_; }
  void set_pool(const VariablePool* pool) { pool_ = pool; }

  Var max_var() const;
  std::vector<Var> vars() const;

  bool operator==(const CnfFormula& o) const { return clauses_ == o.clauses_; }

 private:
  std::vector<Clause> clauses_;
  const VariablePool* pool_ = nullptr;
};

// Three-valued evaluation: true iff every clause has a satisfied literal,
// false iff some clause is fully falsified, undetermined otherwise.
Ternary evaluate(const CnfFormula& f, const Assignment& a);
Ternary evaluate(const Clause& c, const Assignment& a);

// Structure-preserving variable renaming. The map must be total on the
// formula's variables and injective; polarity is preserved.
CnfFormula rename_formula(const CnfFormula& f, const std::unordered_map<Var, Var>& map);
Clause rename_clause(const Clause& c, const std::unordered_map<Var, Var>& map);

// CNF of the negation of f, over the original variables plus fresh
// auxiliaries drawn from the pool: one selector per clause of f, true iff
// that clause is falsified, plus a clause requiring some selector. The
// projection of the result onto the original variables is exactly ~f.
CnfFormula negate_to_cnf(const CnfFormula& f, VariablePool& pool);

// Clause falsified exactly by the given assignment over `vars` (the
// literal-wise negation of its cube).
Clause blocking_clause(const Assignment& a, std::span<const Var> vars);

// Unit clauses pinning the assignment over `vars`.
CnfFormula cube_formula(const Assignment& a, std::span<const Var> vars);

}  // namespace crr
