#include "crr/cnf.hpp"

#include <algorithm>

namespace crr {

const char* to_string(VarRole role) {
  switch (role) {
    case VarRole::kState: return "state";
    case VarRole::kNextState: return "next";
    case VarRole::kInput: return "input";
    case VarRole::kInternal: return "internal";
    case VarRole::kAuxiliary: return "aux";
  }
  return "?";
}

std::string to_string(Lit l) {
  return std::to_string(l.code);
}

Clause::Clause(std::span<const Lit> lits) {
  lits_.assign(lits.begin(), lits.end());
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  for (size_t i = 0; i + 1 < lits_.size(); ++i) {
    if (lits_[i].var() == lits_[i + 1].var())
      throw StructureError("tautological clause: variable " + std::to_string(lits_[i].var()) +
                           " appears with both polarities");
  }
  for (const Lit& l : lits_)
    if (l.var() <= 0) throw StructureError("literal with non-positive variable");
}

bool Clause::contains(Lit l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::mentions(Var v) const { return lit_of(v).has_value(); }

std::optional<Lit> Clause::lit_of(Var v) const {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), Lit::positive(v),
                             [](Lit a, Lit b) { return a.var() < b.var(); });
  if (it != lits_.end() && it->var() == v) return *it;
  return std::nullopt;
}

Clause Clause::with(Lit l) const {
  std::vector<Lit> ext = lits_;
  ext.push_back(l);
  return Clause(ext);
}

void Assignment::set(Var v, bool value) {
  if (v <= 0) throw StructureError("assignment to non-positive variable");
  if (static_cast<size_t>(v) >= vals_.size()) vals_.resize(static_cast<size_t>(v) + 1, -1);
  vals_[static_cast<size_t>(v)] = value ? 1 : 0;
}

void Assignment::unset(Var v) {
  if (v > 0 && static_cast<size_t>(v) < vals_.size()) vals_[static_cast<size_t>(v)] = -1;
}

std::optional<bool> Assignment::value(Var v) const {
  if (v <= 0 || static_cast<size_t>(v) >= vals_.size()) return std::nullopt;
  int8_t raw = vals_[static_cast<size_t>(v)];
  if (raw < 0) return std::nullopt;
  return raw == 1;
}

bool Assignment::complete_over(std::span<const Var> vars) const {
  for (Var v : vars)
    if (!defined(v)) return false;
  return true;
}

std::vector<Lit> Assignment::cube() const {
  std::vector<Lit> out;
  for (size_t v = 1; v < vals_.size(); ++v)
    if (vals_[v] >= 0) out.push_back(Lit(static_cast<Var>(v), vals_[v] == 0));
  return out;
}

std::vector<Var> Assignment::defined_vars() const {
  std::vector<Var> out;
  for (size_t v = 1; v < vals_.size(); ++v)
    if (vals_[v] >= 0) out.push_back(static_cast<Var>(v));
  return out;
}

Assignment Assignment::project(std::span<const Var> vars) const {
  Assignment out;
  for (Var v : vars) {
    auto val = value(v);
    if (!val) throw StructureError("projection over undefined variable " + std::to_string(v));
    out.set(v, *val);
  }
  return out;
}

void Assignment::merge(const Assignment& other) {
  for (size_t v = 1; v < other.vals_.size(); ++v)
    if (other.vals_[v] >= 0) set(static_cast<Var>(v), other.vals_[v] == 1);
}

bool Assignment::satisfies(Lit l) const {
  auto val = value(l.var());
  return val && *val != l.negated();
}

bool Assignment::operator==(const Assignment& o) const {
  size_t n = std::max(vals_.size(), o.vals_.size());
  for (size_t v = 1; v < n; ++v) {
    int8_t a = v < vals_.size() ? vals_[v] : -1;
    int8_t b = v < o.vals_.size() ? o.vals_[v] : -1;
    if (a != b) return false;
  }
  return true;
}

void CnfFormula::add(Clause c) {
  if (pool_) {
    for (const Lit& l : c.lits())
      if (!pool_->contains(l.var()))
        throw StructureError("clause mentions variable " + std::to_string(l.var()) +
                             " not registered in the pool");
  }
  if (std::find(clauses_.begin(), clauses_.end(), c) != clauses_.end()) return;
  clauses_.push_back(std::move(c));
}

void CnfFormula::add_all(const CnfFormula& other) {
  for (const Clause& c : other.clauses()) add(c);
}

Var CnfFormula::max_var() const {
  Var m = 0;
  for (const Clause& c : clauses_)
    for (const Lit& l : c.lits()) m = std::max(m, l.var());
  return m;
}

std::vector<Var> CnfFormula::vars() const {
  std::vector<Var> out;
  for (const Clause& c : clauses_)
    for (const Lit& l : c.lits()) out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Ternary evaluate(const Clause& c, const Assignment& a) {
  bool undecided = false;
  for (const Lit& l : c.lits()) {
    auto val = a.value(l.var());
    if (!val)
      undecided = true;
    else if (*val != l.negated())
      return Ternary::kTrue;
  }
  return undecided ? Ternary::kUndetermined : Ternary::kFalse;
}

Ternary evaluate(const CnfFormula& f, const Assignment& a) {
  bool undecided = false;
  for (const Clause& c : f.clauses()) {
    switch (evaluate(c, a)) {
      case Ternary::kFalse: return Ternary::kFalse;
      case Ternary::kUndetermined: undecided = true; break;
      case Ternary::kTrue: break;
    }
  }
  return undecided ? Ternary::kUndetermined : Ternary::kTrue;
}

namespace {

Var mapped(const std::unordered_map<Var, Var>& map, Var v) {
  auto it = map.find(v);
  if (it == map.end())
    throw StructureError("renaming map not total: variable " + std::to_string(v) + " unmapped");
  return it->second;
}

void check_injective(const std::unordered_map<Var, Var>& map) {
  std::unordered_map<Var, Var> inverse;
  for (const auto& [from, to] : map) {
    auto [it, inserted] = inverse.emplace(to, from);
    if (!inserted && it->second != from)
      throw StructureError("renaming map not injective: " + std::to_string(it->second) + " and " +
                           std::to_string(from) + " both map to " + std::to_string(to));
  }
}

}  // namespace

Clause rename_clause(const Clause& c, const std::unordered_map<Var, Var>& map) {
  std::vector<Lit> lits;
  lits.reserve(c.size());
  for (const Lit& l : c.lits()) lits.push_back(Lit(mapped(map, l.var()), l.negated()));
  return Clause(lits);
}

CnfFormula rename_formula(const CnfFormula& f, const std::unordered_map<Var, Var>& map) {
  check_injective(map);
  CnfFormula out;
  for (const Clause& c : f.clauses()) out.add(rename_clause(c, map));
  return out;
}

CnfFormula negate_to_cnf(const CnfFormula& f, VariablePool& pool) {
  CnfFormula out;
  if (f.empty()) {
    out.add(Clause{});  // ~true = false
    return out;
  }
  std::vector<Lit> some_falsified;
  for (const Clause& c : f.clauses()) {
    Var sel = pool.fresh(VarRole::kAuxiliary);
    // sel <-> (every literal of c false)
    std::vector<Lit> back{Lit::positive(sel)};
    for (const Lit& l : c.lits()) {
      out.add(Clause({Lit::negative(sel), ~l}));
      back.push_back(l);
    }
    out.add(Clause(back));
    some_falsified.push_back(Lit::positive(sel));
  }
  out.add(Clause(some_falsified));
  return out;
}

Clause blocking_clause(const Assignment& a, std::span<const Var> vars) {
  std::vector<Lit> lits;
  lits.reserve(vars.size());
  for (Var v : vars) {
    auto val = a.value(v);
    if (!val) throw StructureError("blocking clause over undefined variable " + std::to_string(v));
    lits.push_back(Lit(v, *val));  // negation of the satisfied literal
  }
  return Clause(lits);
}

CnfFormula cube_formula(const Assignment& a, std::span<const Var> vars) {
  CnfFormula out;
  for (Var v : vars) {
    auto val = a.value(v);
    if (!val) throw StructureError("cube over undefined variable " + std::to_string(v));
    out.add_unit(Lit(v, !*val));
  }
  return out;
}

}  // namespace crr
