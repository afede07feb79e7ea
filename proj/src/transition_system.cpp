#include "crr/transition_system.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace crr {

bool TransitionSystem::state_is_good(const Assignment& state) const {
  Assignment in = state;
  for (Var x : input_vars) in.set(x, false);  // property cone is input-free by construction
  Assignment wires = circuit.simulate(in);
  return !circuit.eval(bad_lit, wires);
}

Assignment TransitionSystem::successor(const Assignment& state, const Assignment& input) const {
  Assignment in = state;
  in.merge(input);
  Assignment wires = circuit.simulate(in);
  Assignment next;
  for (size_t i = 0; i < state_vars.size(); ++i)
    next.set(state_vars[i], circuit.eval(next_lits[i], wires));
  return next;
}

void TransitionSystem::check_init_implies_property(int64_t conflict_budget) const {
  Solver s;
  s.set_conflict_budget(conflict_budget);
  s.ensure_vars(static_cast<Var>(pool.size()));
  s.add_formula(init);
  s.add_formula(prop_bad);
  switch (s.solve()) {
    case SolveStatus::kUnsat: return;
    case SolveStatus::kSat:
      throw StructureError("model '" + name + "': an initial state violates the property");
    case SolveStatus::kResourceOut: throw ResourceOutError("init-implies-property check");
  }
}

void CounterSpec::validate() const {
  if (bits < 1 || bits > 20) throw StructureError("counter bit width out of range");
  const uint64_t period = uint64_t{1} << bits;
  if (threshold < 1 || static_cast<uint64_t>(threshold) >= period)
    throw StructureError("counter threshold must satisfy 0 < d < 2^k");
}

std::string CounterSpec::display_name() const {
  std::string n = "counter_k" + std::to_string(bits) + "_d" + std::to_string(threshold);
  if (encoding == CounterEncoding::kSeededPermutation)
    n += "_perm" + std::to_string(permutation_seed);
  return n;
}

std::vector<uint32_t> counter_codes(const CounterSpec& spec) {
  const uint32_t period = uint32_t{1} << spec.bits;
  std::vector<uint32_t> codes(period);
  for (uint32_t v = 0; v < period; ++v) codes[v] = v;
  if (spec.encoding == CounterEncoding::kSeededPermutation) {
    // Explicit Fisher-Yates so the permutation is stable across platforms.
    std::mt19937_64 rng(spec.permutation_seed);
    for (uint32_t i = period - 1; i > 0; --i) {
      uint32_t j = static_cast<uint32_t>(rng() % (i + 1));
      std::swap(codes[i], codes[j]);
    }
  }
  return codes;
}

namespace {

struct CircuitBuilder {
  VariablePool& pool;
  Circuit& circuit;

  AigLit make_and(AigLit a, AigLit b) {
    if (a == kAigFalse || b == kAigFalse || a == aig_not(b)) return kAigFalse;
    if (a == kAigTrue) return b;
    if (b == kAigTrue || a == b) return a;
    Var out = pool.fresh(VarRole::kInternal);
    circuit.add_gate(out, a, b);
    return aig_of(out);
  }

  AigLit make_and_tree(const std::vector<AigLit>& lits) {
    AigLit acc = kAigTrue;
    for (AigLit l : lits) acc = make_and(acc, l);
    return acc;
  }

  AigLit make_or_tree(const std::vector<AigLit>& lits) {
    std::vector<AigLit> inv;
    inv.reserve(lits.size());
    for (AigLit l : lits) inv.push_back(aig_not(l));
    return aig_not(make_and_tree(inv));
  }

  AigLit make_mux(AigLit sel, AigLit on_true, AigLit on_false) {
    AigLit hi = make_and(sel, on_true);
    AigLit lo = make_and(aig_not(sel), on_false);
    return aig_not(make_and(aig_not(hi), aig_not(lo)));
  }
};

void add_equivalence(CnfFormula& f, Var v, AigLit edge) {
  Lit sv = Lit::positive(v);
  if (edge == kAigFalse) {
    f.add(Clause({~sv}));
  } else if (edge == kAigTrue) {
    f.add(Clause({sv}));
  } else {
    Lit e(aig_var(edge), aig_negated(edge));
    f.add(Clause({~sv, e}));
    f.add(Clause({sv, ~e}));
  }
}

void finish_formulas(TransitionSystem& ts) {
  ts.trans = tseitin_encode(ts.circuit);
  for (size_t i = 0; i < ts.state_vars.size(); ++i)
    add_equivalence(ts.trans, ts.next_state_vars[i], ts.next_lits[i]);

  CnfFormula cone = tseitin_cone(ts.circuit, ts.bad_lit);
  ts.prop_good = cone;
  ts.prop_bad = cone;
  if (ts.bad_lit == kAigFalse) {
    ts.prop_bad.add(Clause{});  // property always holds
  } else if (ts.bad_lit == kAigTrue) {
    ts.prop_good.add(Clause{});
  } else {
    Lit b(aig_var(ts.bad_lit), aig_negated(ts.bad_lit));
    ts.prop_good.add(Clause({~b}));
    ts.prop_bad.add(Clause({b}));
  }
  ts.gate_count = static_cast<int>(ts.circuit.gates().size());
}

}  // namespace

TransitionSystem abstract_counter(const CounterSpec& spec) {
  spec.validate();
  const int k = spec.bits;
  const uint32_t period = uint32_t{1} << k;
  std::vector<uint32_t> codes = counter_codes(spec);

  TransitionSystem ts;
  ts.name = spec.display_name();
  for (int i = 0; i < k; ++i) ts.state_vars.push_back(ts.pool.fresh(VarRole::kState));
  Var x = ts.pool.fresh(VarRole::kInput);
  ts.input_vars.push_back(x);
  for (Var s : ts.state_vars) ts.circuit.add_input(s);
  ts.circuit.add_input(x);

  CircuitBuilder cb{ts.pool, ts.circuit};

  // One recognizer cube per value; cube_of[v] is true exactly in the state
  // whose bit pattern encodes value v.
  std::vector<AigLit> cube_of(period);
  for (uint32_t v = 0; v < period; ++v) {
    std::vector<AigLit> lits;
    for (int i = 0; i < k; ++i) {
      bool bit = (codes[v] >> i) & 1;
      lits.push_back(aig_of(ts.state_vars[static_cast<size_t>(i)], !bit));
    }
    cube_of[v] = cb.make_and_tree(lits);
  }

  // Incremented pattern per bit: which current values set bit i after +1.
  for (int i = 0; i < k; ++i) {
    std::vector<AigLit> on;
    for (uint32_t v = 0; v < period; ++v) {
      uint32_t succ = codes[(v + 1) % period];
      if ((succ >> i) & 1) on.push_back(cube_of[v]);
    }
    AigLit inc_bit = cb.make_or_tree(on);
    AigLit hold_bit = aig_of(ts.state_vars[static_cast<size_t>(i)]);
    AigLit next = cb.make_mux(aig_of(x), inc_bit, hold_bit);
    ts.next_lits.push_back(next);
  }
  for (int i = 0; i < k; ++i)
    ts.next_state_vars.push_back(ts.pool.fresh(VarRole::kNextState));

  // Bad states: value at or above the threshold.
  std::vector<AigLit> bad_cubes;
  for (uint32_t v = static_cast<uint32_t>(spec.threshold); v < period; ++v)
    bad_cubes.push_back(cube_of[v]);
  ts.bad_lit = cb.make_or_tree(bad_cubes);

  for (int i = 0; i < k; ++i)
    ts.init.add_unit(Lit(ts.state_vars[static_cast<size_t>(i)], ((codes[0] >> i) & 1) == 0));

  finish_formulas(ts);
  ts.check_init_implies_property();
  return ts;
}

namespace {

struct AigerLine {
  int number = 0;
  std::string text;
};

[[noreturn]] void aiger_fail(int line, const std::string& what) {
  throw ParseError("AIGER line " + std::to_string(line) + ": " + what);
}

std::vector<uint64_t> parse_uints(const AigerLine& line, size_t min_count, size_t max_count) {
  std::istringstream is(line.text);
  std::vector<uint64_t> out;
  uint64_t v;
  while (is >> v) out.push_back(v);
  std::string trailing;
  if (is.clear(), is >> trailing) aiger_fail(line.number, "unexpected token '" + trailing + "'");
  if (out.size() < min_count || out.size() > max_count)
    aiger_fail(line.number, "expected between " + std::to_string(min_count) + " and " +
                                std::to_string(max_count) + " integers");
  return out;
}

}  // namespace

TransitionSystem parse_aiger(std::istream& is, const std::string& name) {
  std::string first;
  if (!std::getline(is, first)) throw ParseError("empty AIGER input");
  {
    std::istringstream hs(first);
    std::string magic;
    hs >> magic;
    if (magic == "aig") throw ParseError("binary AIGER unsupported");
    if (magic != "aag") throw ParseError("AIGER line 1: bad magic '" + magic + "'");
  }
  AigerLine header{1, first.substr(3)};
  std::vector<uint64_t> h = parse_uints(header, 5, 9);
  const uint64_t max_idx = h[0];
  const uint64_t n_in = h[1], n_latch = h[2], n_out = h[3], n_and = h[4];
  const uint64_t n_bad = h.size() > 5 ? h[5] : 0;
  const uint64_t n_constr = h.size() > 6 ? h[6] : 0;
  const uint64_t n_just = h.size() > 7 ? h[7] : 0;
  const uint64_t n_fair = h.size() > 8 ? h[8] : 0;
  if (n_constr > 0) throw ParseError("AIGER line 1: invariant constraints unsupported");
  if (n_just > 0 || n_fair > 0) throw ParseError("AIGER line 1: justice/fairness unsupported");
  if (n_in + n_latch + n_and > max_idx) throw ParseError("AIGER line 1: header counts exceed maximum index");

  int line_no = 1;
  auto next_line = [&]() -> AigerLine {
    std::string text;
    if (!std::getline(is, text)) aiger_fail(line_no + 1, "unexpected end of file");
    return AigerLine{++line_no, text};
  };

  TransitionSystem ts;
  ts.name = name;

  // AIGER variable index -> pool variable, built eagerly so literal checks
  // can name the offending line.
  std::vector<Var> var_of(max_idx + 1, kNoVar);
  std::vector<uint8_t> declared(max_idx + 1, 0);  // 1 input, 2 latch, 3 and

  auto declare = [&](const AigerLine& ln, uint64_t lit, uint8_t kind, VarRole role) -> Var {
    if (lit < 2 || (lit & 1) != 0) aiger_fail(ln.number, "definition literal must be even and positive");
    uint64_t idx = lit >> 1;
    if (idx > max_idx) aiger_fail(ln.number, "literal index " + std::to_string(lit) + " exceeds maximum");
    if (declared[idx] != 0) aiger_fail(ln.number, "literal " + std::to_string(lit) + " defined twice");
    declared[idx] = kind;
    var_of[idx] = ts.pool.fresh(role);
    return var_of[idx];
  };
  auto reference = [&](const AigerLine& ln, uint64_t lit) -> AigLit {
    if (lit < 2) return lit == 0 ? kAigFalse : kAigTrue;
    uint64_t idx = lit >> 1;
    if (idx > max_idx || declared[idx] == 0)
      aiger_fail(ln.number, "dangling literal " + std::to_string(lit));
    return aig_of(var_of[idx], (lit & 1) != 0);
  };

  struct LatchDecl {
    AigerLine line;
    uint64_t next = 0;
    std::optional<bool> reset;
  };
  std::vector<AigerLine> input_lines, output_lines, bad_lines, and_lines;
  std::vector<LatchDecl> latch_decls;

  for (uint64_t i = 0; i < n_in; ++i) {
    AigerLine ln = next_line();
    uint64_t lit = parse_uints(ln, 1, 1)[0];
    Var v = declare(ln, lit, 1, VarRole::kInput);
    ts.input_vars.push_back(v);
  }
  for (uint64_t i = 0; i < n_latch; ++i) {
    AigerLine ln = next_line();
    std::vector<uint64_t> vals = parse_uints(ln, 2, 3);
    Var v = declare(ln, vals[0], 2, VarRole::kState);
    ts.state_vars.push_back(v);
    LatchDecl d{ln, vals[1], false};
    if (vals.size() == 3) {
      if (vals[2] == 0) d.reset = false;
      else if (vals[2] == 1) d.reset = true;
      else if (vals[2] == vals[0]) d.reset = std::nullopt;  // uninitialized latch
      else aiger_fail(ln.number, "latch reset must be 0, 1, or the latch literal");
    }
    latch_decls.push_back(std::move(d));
  }
  for (uint64_t i = 0; i < n_out; ++i) output_lines.push_back(next_line());
  for (uint64_t i = 0; i < n_bad; ++i) bad_lines.push_back(next_line());
  for (uint64_t i = 0; i < n_and; ++i) {
    AigerLine ln = next_line();
    uint64_t lhs = parse_uints(ln, 3, 3)[0];
    declare(ln, lhs, 3, VarRole::kInternal);
    and_lines.push_back(ln);
  }
  // Symbol table and comments, if present, are ignored.

  for (Var v : ts.state_vars) ts.circuit.add_input(v);
  for (Var v : ts.input_vars) ts.circuit.add_input(v);

  for (const AigerLine& ln : and_lines) {
    std::vector<uint64_t> vals = parse_uints(ln, 3, 3);
    Var out = var_of[vals[0] >> 1];
    ts.circuit.add_gate(out, reference(ln, vals[1]), reference(ln, vals[2]));
  }

  for (const LatchDecl& d : latch_decls) ts.next_lits.push_back(reference(d.line, d.next));
  for (size_t i = 0; i < ts.state_vars.size(); ++i)
    ts.next_state_vars.push_back(ts.pool.fresh(VarRole::kNextState));

  // The single property: one bad line, or the sole output in the older style.
  if (n_bad > 1) throw ParseError("multiple bad-state properties unsupported");
  if (n_bad == 1) {
    if (n_out > 0) throw ParseError("both outputs and bad-state lines present; property ambiguous");
    ts.bad_lit = reference(bad_lines[0], parse_uints(bad_lines[0], 1, 1)[0]);
  } else {
    if (n_out != 1) throw ParseError("expected exactly one property output or bad line");
    ts.bad_lit = reference(output_lines[0], parse_uints(output_lines[0], 1, 1)[0]);
  }

  for (Var v : ts.circuit.support(ts.bad_lit))
    if (ts.pool.role(v) == VarRole::kInput)
      throw ParseError("property cone depends on combinational input variable");

  for (size_t i = 0; i < latch_decls.size(); ++i)
    if (latch_decls[i].reset.has_value())
      ts.init.add_unit(Lit(ts.state_vars[i], !*latch_decls[i].reset));

  finish_formulas(ts);
  ts.check_init_implies_property();
  return ts;
}

TransitionSystem parse_aiger_text(const std::string& text, const std::string& name) {
  std::istringstream is(text);
  return parse_aiger(is, name);
}

TransitionSystem load_aiger_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path + "'");
  return parse_aiger(is, path);
}

void write_aiger(std::ostream& os, const TransitionSystem& ts) {
  // Canonical reindexing: inputs, then latches, then gates in dependency order.
  std::unordered_map<Var, uint64_t> index;
  uint64_t next_index = 1;
  for (Var v : ts.input_vars) index[v] = next_index++;
  for (Var v : ts.state_vars) index[v] = next_index++;
  std::vector<AndGate> gates = ts.circuit.topo_order();
  for (const AndGate& g : gates) index[g.out] = next_index++;

  auto lit_of = [&](AigLit l) -> uint64_t {
    if (aig_is_const(l)) return l == kAigTrue ? 1 : 0;
    auto it = index.find(aig_var(l));
    if (it == index.end()) throw StructureError("AIGER writer: wire not indexed");
    return 2 * it->second + (aig_negated(l) ? 1 : 0);
  };

  // Reset values read back from the initial-state cube.
  Assignment init_vals;
  for (const Clause& c : ts.init.clauses())
    if (c.size() == 1) init_vals.set(c.lits()[0].var(), !c.lits()[0].negated());

  os << "aag " << (next_index - 1) << ' ' << ts.input_vars.size() << ' ' << ts.state_vars.size()
     << " 0 " << gates.size() << " 1\n";
  for (Var v : ts.input_vars) os << 2 * index[v] << '\n';
  for (size_t i = 0; i < ts.state_vars.size(); ++i) {
    uint64_t self = 2 * index[ts.state_vars[i]];
    os << self << ' ' << lit_of(ts.next_lits[i]);
    auto r = init_vals.value(ts.state_vars[i]);
    if (!r) os << ' ' << self;  // uninitialized
    else os << ' ' << (*r ? 1 : 0);
    os << '\n';
  }
  os << lit_of(ts.bad_lit) << '\n';
  for (const AndGate& g : gates)
    os << 2 * index[g.out] << ' ' << lit_of(g.a) << ' ' << lit_of(g.b) << '\n';
}

std::string to_aiger_text(const TransitionSystem& ts) {
  std::ostringstream os;
  write_aiger(os, ts);
  return os.str();
}

}  // namespace crr
