#include "crr/circuit.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace crr {

namespace {

enum class Mark : uint8_t { kUnseen, kOpen, kDone };

}  // namespace

std::vector<AndGate> Circuit::topo_order() const {
  std::unordered_map<Var, size_t> def;  // gate output -> gate index
  std::unordered_set<Var> input_set(inputs_.begin(), inputs_.end());
  for (size_t i = 0; i < gates_.size(); ++i) {
    Var out = gates_[i].out;
    if (input_set.count(out)) throw StructureError("gate output redefines input wire " + std::to_string(out));
    if (!def.emplace(out, i).second)
      throw StructureError("wire " + std::to_string(out) + " defined by two gates");
  }

  std::vector<AndGate> order;
  order.reserve(gates_.size());
  std::unordered_map<Var, Mark> mark;
  // Iterative DFS over gate dependencies.
  std::vector<std::pair<size_t, int>> stack;
  for (size_t root = 0; root < gates_.size(); ++root) {
    if (mark[gates_[root].out] == Mark::kDone) continue;
    stack.push_back({root, 0});
    mark[gates_[root].out] = Mark::kOpen;
    while (!stack.empty()) {
      auto& [gi, phase] = stack.back();
      const AndGate& g = gates_[gi];
      bool descended = false;
      for (; phase < 2 && !descended; ++phase) {
        AigLit operand = phase == 0 ? g.a : g.b;
        if (aig_is_const(operand)) continue;
        Var v = aig_var(operand);
        if (input_set.count(v)) continue;
        auto it = def.find(v);
        if (it == def.end())
          throw StructureError("undeclared wire " + std::to_string(v) + " used by gate " +
                               std::to_string(g.out));
        Mark m = mark[v];
        if (m == Mark::kOpen) throw StructureError("cyclic circuit through wire " + std::to_string(v));
        if (m == Mark::kUnseen) {
          mark[v] = Mark::kOpen;
          stack.push_back({it->second, 0});
          descended = true;
        }
      }
      if (!descended && phase >= 2) {
        mark[g.out] = Mark::kDone;
        order.push_back(g);
        stack.pop_back();
      }
    }
  }
  return order;
}

std::vector<Var> Circuit::support(AigLit root) const {
  if (aig_is_const(root)) return {};
  std::unordered_map<Var, size_t> def;
  for (size_t i = 0; i < gates_.size(); ++i) def[gates_[i].out] = i;
  std::vector<Var> out;
  std::unordered_set<Var> seen;
  std::vector<Var> work{aig_var(root)};
  while (!work.empty()) {
    Var v = work.back();
    work.pop_back();
    if (!seen.insert(v).second) continue;
    auto it = def.find(v);
    if (it == def.end()) {
      out.push_back(v);  // leaf wire
      continue;
    }
    const AndGate& g = gates_[it->second];
    if (!aig_is_const(g.a)) work.push_back(aig_var(g.a));
    if (!aig_is_const(g.b)) work.push_back(aig_var(g.b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Circuit::eval(AigLit l, const Assignment& wires) const {
  if (l == kAigFalse) return false;
  if (l == kAigTrue) return true;
  auto val = wires.value(aig_var(l));
  if (!val) throw StructureError("wire " + std::to_string(aig_var(l)) + " has no value");
  return *val != aig_negated(l);
}

Assignment Circuit::simulate(const Assignment& input_values) const {
  Assignment wires;
  for (Var v : inputs_) {
    auto val = input_values.value(v);
    if (!val) throw StructureError("simulation input " + std::to_string(v) + " undefined");
    wires.set(v, *val);
  }
  for (const AndGate& g : topo_order()) wires.set(g.out, eval(g.a, wires) && eval(g.b, wires));
  return wires;
}

namespace {

void encode_gate(CnfFormula& out, const AndGate& g) {
  Lit z = Lit::positive(g.out);
  if (g.a == kAigFalse || g.b == kAigFalse || g.a == aig_not(g.b)) {
    out.add(Clause({~z}));
    return;
  }
  if (g.a == kAigTrue && g.b == kAigTrue) {
    out.add(Clause({z}));
    return;
  }
  if (g.a == kAigTrue || g.b == kAigTrue || g.a == g.b) {
    AigLit other = (g.a == kAigTrue || g.a == g.b) ? g.b : g.a;
    Lit o(aig_var(other), aig_negated(other));
    out.add(Clause({~z, o}));
    out.add(Clause({z, ~o}));
    return;
  }
  Lit a(aig_var(g.a), aig_negated(g.a));
  Lit b(aig_var(g.b), aig_negated(g.b));
  out.add(Clause({~z, a}));
  out.add(Clause({~z, b}));
  out.add(Clause({z, ~a, ~b}));
}

}  // namespace

CnfFormula tseitin_encode(const Circuit& c) {
  CnfFormula out;
  for (const AndGate& g : c.topo_order()) encode_gate(out, g);
  return out;
}

CnfFormula tseitin_cone(const Circuit& c, AigLit root) {
  CnfFormula out;
  if (aig_is_const(root)) return out;
  std::unordered_set<Var> cone;
  {
    std::unordered_map<Var, size_t> def;
    for (size_t i = 0; i < c.gates().size(); ++i) def[c.gates()[i].out] = i;
    std::vector<Var> work{aig_var(root)};
    while (!work.empty()) {
      Var v = work.back();
      work.pop_back();
      if (!cone.insert(v).second) continue;
      auto it = def.find(v);
      if (it == def.end()) continue;
      if (!aig_is_const(c.gates()[it->second].a)) work.push_back(aig_var(c.gates()[it->second].a));
      if (!aig_is_const(c.gates()[it->second].b)) work.push_back(aig_var(c.gates()[it->second].b));
    }
  }
  for (const AndGate& g : c.topo_order())
    if (cone.count(g.out)) encode_gate(out, g);
  return out;
}

}  // namespace crr
