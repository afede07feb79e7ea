#include "crr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace crr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Clause random_input_clause(const TransitionSystem& ts, double fraction, uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) throw StructureError("clause fraction must be in (0, 1]");
  const size_t n = ts.state_vars.size();
  size_t len = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
  len = std::min(std::max<size_t>(len, 1), n);

  std::mt19937_64 rng(seed);
  std::vector<Var> vars = ts.state_vars;
  for (size_t i = vars.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng() % (i + 1));
    std::swap(vars[i], vars[j]);
  }
  std::vector<Lit> lits;
  for (size_t i = 0; i < len; ++i) lits.push_back(Lit(vars[i], (rng() & 1) != 0));
  return Clause(lits);
}

int estimate_range_size_log2(const CnfFormula& g, std::span<const Var> free_vars,
                             const RangeEstimateOptions& opt) {
  Solver enumerator(opt.seed);
  enumerator.set_conflict_budget(opt.conflict_budget);
  Var top = g.max_var();
  for (Var v : free_vars) top = std::max(top, v);
  enumerator.ensure_vars(top);
  enumerator.add_formula(g);

  // Membership checks share one solver; results are memoized by point.
  Solver member(opt.seed);
  member.set_conflict_budget(opt.conflict_budget);
  member.ensure_vars(top);
  member.add_formula(g);
  std::unordered_map<uint64_t, bool> memo;
  uint64_t checks = 0;
  auto in_range = [&](const Assignment& point) -> std::optional<bool> {
    uint64_t key = 0;
    for (size_t i = 0; i < free_vars.size(); ++i)
      if (*point.value(free_vars[i])) key |= uint64_t{1} << i;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++checks > opt.max_point_checks) return std::nullopt;
    SolveStatus st = member.solve(point.cube());
    if (st == SolveStatus::kResourceOut) throw ResourceOutError("range membership");
    bool in = st == SolveStatus::kSat;
    memo.emplace(key, in);
    return in;
  };

  if (free_vars.size() > 62) throw StructureError("range estimation beyond key width");

  int best_dropped = -1;
  for (int m = 0; m < opt.max_models; ++m) {
    SolveStatus st = enumerator.solve();
    if (st == SolveStatus::kResourceOut) throw ResourceOutError("range enumeration");
    if (st == SolveStatus::kUnsat) break;
    Assignment point = enumerator.model(free_vars);
    enumerator.add_clause(blocking_clause(point, free_vars));

    // Widen the point into a cube, dropping variables from the highest id
    // down; a drop stands only if every completion stays in the range.
    std::vector<Var> kept(free_vars.begin(), free_vars.end());
    std::vector<Var> dropped;
    for (size_t idx = free_vars.size(); idx-- > 0;) {
      Var candidate = free_vars[idx];
      std::vector<Var> trial_dropped = dropped;
      trial_dropped.push_back(candidate);
      if (trial_dropped.size() > 20) break;  // completion count guard
      bool all_in = true;
      const uint64_t combos = uint64_t{1} << trial_dropped.size();
      for (uint64_t mask = 0; mask < combos && all_in; ++mask) {
        Assignment probe = point;
        for (size_t d = 0; d < trial_dropped.size(); ++d)
          probe.set(trial_dropped[d], (mask >> d) & 1);
        auto in = in_range(probe);
        if (!in) { all_in = false; break; }  // budget: keep the literal
        all_in = *in;
      }
      if (all_in) dropped = std::move(trial_dropped);
    }
    best_dropped = std::max(best_dropped, static_cast<int>(dropped.size()));
    if (best_dropped == static_cast<int>(free_vars.size())) break;
  }
  return std::max(best_dropped, 0);
}

std::string RandomSystemSpec::display_name() const {
  return "random_l" + std::to_string(latches) + "_i" + std::to_string(inputs) + "_g" +
         std::to_string(gates) + "_s" + std::to_string(seed);
}

TransitionSystem random_system(const RandomSystemSpec& spec) {
  if (spec.latches < 1 || spec.inputs < 0 || spec.gates < 0)
    throw StructureError("malformed random system spec");
  std::mt19937_64 rng(spec.seed);

  TransitionSystem ts;
  ts.name = spec.display_name();
  for (int i = 0; i < spec.latches; ++i) ts.state_vars.push_back(ts.pool.fresh(VarRole::kState));
  for (int i = 0; i < spec.inputs; ++i) ts.input_vars.push_back(ts.pool.fresh(VarRole::kInput));
  for (Var v : ts.state_vars) ts.circuit.add_input(v);
  for (Var v : ts.input_vars) ts.circuit.add_input(v);

  // Wires usable as operands, with a parallel note of which are state-only
  // cones (property candidates).
  std::vector<AigLit> wires;
  std::vector<bool> state_only;
  for (Var v : ts.state_vars) {
    wires.push_back(aig_of(v));
    state_only.push_back(true);
  }
  for (Var v : ts.input_vars) {
    wires.push_back(aig_of(v));
    state_only.push_back(false);
  }
  auto pick_edge = [&]() -> AigLit {
    AigLit w = wires[rng() % wires.size()];
    return (rng() & 1) ? aig_not(w) : w;
  };
  for (int i = 0; i < spec.gates; ++i) {
    AigLit a = pick_edge();
    AigLit b = pick_edge();
    if (a == aig_not(b)) b = aig_not(b);  // avoid a constant gate
    Var out = ts.pool.fresh(VarRole::kInternal);
    ts.circuit.add_gate(out, a, b);
    bool so = state_only[static_cast<size_t>(aig_var(a)) - 1] &&
              state_only[static_cast<size_t>(aig_var(b)) - 1];
    wires.push_back(aig_of(out));
    state_only.push_back(so);
  }

  for (int i = 0; i < spec.latches; ++i) {
    ts.next_lits.push_back(pick_edge());
    ts.next_state_vars.push_back(ts.pool.fresh(VarRole::kNextState));
  }

  Assignment init_state;
  for (Var v : ts.state_vars) {
    bool bit = (rng() & 1) != 0;
    init_state.set(v, bit);
    ts.init.add_unit(Lit(v, !bit));
  }

  std::vector<AigLit> property_candidates;
  for (size_t i = 0; i < wires.size(); ++i)
    if (state_only[i]) property_candidates.push_back(wires[i]);
  AigLit bad = property_candidates[rng() % property_candidates.size()];
  if ((rng() & 1) != 0) bad = aig_not(bad);

  // The initial state must be good; flip the property cone if it is not.
  {
    Assignment in = init_state;
    for (Var v : ts.input_vars) in.set(v, false);
    Assignment sim = ts.circuit.simulate(in);
    if (ts.circuit.eval(bad, sim)) bad = aig_not(bad);
  }
  ts.bad_lit = bad;

  ts.trans = tseitin_encode(ts.circuit);
  for (size_t i = 0; i < ts.state_vars.size(); ++i) {
    Lit sv = Lit::positive(ts.next_state_vars[i]);
    AigLit e = ts.next_lits[i];
    if (e == kAigFalse) ts.trans.add(Clause({~sv}));
    else if (e == kAigTrue) ts.trans.add(Clause({sv}));
    else {
      Lit el(aig_var(e), aig_negated(e));
      ts.trans.add(Clause({~sv, el}));
      ts.trans.add(Clause({sv, ~el}));
    }
  }
  CnfFormula cone = tseitin_cone(ts.circuit, ts.bad_lit);
  ts.prop_good = cone;
  ts.prop_bad = cone;
  if (ts.bad_lit == kAigFalse) ts.prop_bad.add(Clause{});
  else if (ts.bad_lit == kAigTrue) ts.prop_good.add(Clause{});
  else {
    Lit b(aig_var(ts.bad_lit), aig_negated(ts.bad_lit));
    ts.prop_good.add(Clause({~b}));
    ts.prop_bad.add(Clause({b}));
  }
  ts.gate_count = static_cast<int>(ts.circuit.gates().size());
  ts.check_init_implies_property();
  return ts;
}

std::vector<GridCell> counter_verdict_grid(std::span<const int> bit_widths, int max_bound,
                                           uint64_t perm_seed, const CheckOptions& opt) {
  std::vector<GridCell> cells;
  for (int k : bit_widths) {
    const int max_d = (1 << k) - 2;
    for (int d = 1; d <= max_d; ++d) {
      for (CounterEncoding enc : {CounterEncoding::kStandardBinary,
                                  CounterEncoding::kSeededPermutation}) {
        CounterSpec spec{k, d, enc, perm_seed};
        TransitionSystem ts = abstract_counter(spec);
        for (int n = 1; n <= max_bound; ++n) {
          GridCell cell;
          cell.bits = k;
          cell.threshold = d;
          cell.bound = n;
          cell.encoding = enc;
          Verdict vc = mc_crr(ts, n, opt);
          Verdict vb = bmc(ts, n, opt);
          cell.crr_kind = vc.kind;
          cell.bmc_kind = vb.kind;
          cell.crr_cex_length = vc.cex.length();
          cell.bmc_cex_length = vb.cex.length();
          cell.agree = vc.fails() == vb.fails() && vc.kind != Verdict::Kind::kResourceOut &&
                       vb.kind != Verdict::Kind::kResourceOut;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

std::string ModelEntry::display_name() const {
  if (std::holds_alternative<std::string>(source)) return std::get<std::string>(source);
  if (std::holds_alternative<CounterSpec>(source)) return std::get<CounterSpec>(source).display_name();
  return std::get<RandomSystemSpec>(source).display_name();
}

TransitionSystem load_model(const ModelEntry& entry) {
  if (std::holds_alternative<std::string>(entry.source))
    return load_aiger_file(std::get<std::string>(entry.source));
  if (std::holds_alternative<CounterSpec>(entry.source))
    return abstract_counter(std::get<CounterSpec>(entry.source));
  return random_system(std::get<RandomSystemSpec>(entry.source));
}

namespace {

struct TimedOutcome {
  double secs = -1;               // negative: budget exhausted
  std::optional<PqeSolution> sol;  // present when finished
};

TimedOutcome timed_take_out(const PqeProblem& p, const ExperimentConfig& cfg, uint64_t seed) {
  PqeOptions po;
  po.seed = seed;
  po.conflict_budget = cfg.conflict_budget;
  po.wall_budget_secs = cfg.wall_per_row_secs;
  po.max_rounds = cfg.pqe_round_cap;
  auto t0 = std::chrono::steady_clock::now();
  PqeSolution sol = take_out(p, po);
  double secs = seconds_since(t0);
  TimedOutcome out;
  if (sol.resource_out) return out;
  out.secs = secs;
  out.sol = std::move(sol);
  return out;
}

}  // namespace

std::pair<std::vector<ExperimentRow>, ExperimentSummary> run_experiment(
    std::span<const ModelEntry> models, const ExperimentConfig& cfg) {
  std::vector<ExperimentRow> rows;
  ExperimentSummary summary;
  for (const ModelEntry& entry : models) {
    ExperimentRow row;
    row.model = entry.display_name();
    ++summary.rows;
    try {
      TransitionSystem ts = load_model(entry);
      row.x_inputs = static_cast<int>(ts.input_vars.size());
      row.latches = static_cast<int>(ts.state_vars.size());
      row.gates = ts.gate_count;

      Clause c = random_input_clause(ts, cfg.clause_fraction, entry.seed);

      // Shared problem skeleton: quantify current state, inputs and
      // internal wires; the next-state variables stay free.
      auto make_problem = [&](const Clause& constraining) {
        PqeProblem p;
        p.f.add(constraining);
        p.g = ts.trans;
        p.free_vars = ts.next_state_vars;
        for (Var v = 1; v <= ts.pool.size(); ++v)
          if (std::find(ts.next_state_vars.begin(), ts.next_state_vars.end(), v) ==
              ts.next_state_vars.end())
            p.quantified.push_back(v);
        return p;
      };

      // Method 1: raw take-out.
      TimedOutcome raw = timed_take_out(make_problem(c), cfg, entry.seed);
      row.pqe_secs = raw.secs;
      if (raw.sol) ++summary.pqe_raw_solved;

      // Method 2: widen the clause first. Any variable of the relation may
      // enter the widened clause.
      TimedOutcome expanded;
      {
        auto t0 = std::chrono::steady_clock::now();
        PqeOptions po;
        po.conflict_budget = cfg.conflict_budget;
        std::vector<Var> candidates;
        for (Var v = 1; v <= ts.pool.size(); ++v) candidates.push_back(v);
        Clause widened = expand_clause(c, ts.trans, candidates, po);
        expanded = timed_take_out(make_problem(widened), cfg, entry.seed);
        if (expanded.sol) expanded.secs = seconds_since(t0);  // include expansion time
      }
      row.pqe_exp_secs = expanded.secs;
      if (expanded.sol) ++summary.pqe_expanded_solved;

      const PqeSolution* flagged = expanded.sol ? &*expanded.sol : (raw.sol ? &*raw.sol : nullptr);
      if (flagged) {
        row.h_empty = flagged->h.empty();
        if (!flagged->h.empty()) {
          bool all_implied = true;
          for (const Clause& hc : flagged->h.clauses())
            if (!is_implied(ts.trans, hc, cfg.conflict_budget)) { all_implied = false; break; }
          row.h_implied = all_implied;
          // A solution implied by T is pure noise; discarding it (when
          // configured) leaves the empty solution to the same problem.
          if (row.h_implied && cfg.discard_pure_noise) row.h_empty = true;
        }
        if (row.h_empty) ++summary.h_empty_count;
        if (row.h_implied) ++summary.h_implied_count;
      }

      // QE baseline: the full range of the transition function, which takes
      // the whole formula out of the quantifier scope.
      {
        std::vector<Var> quantified;
        for (Var v = 1; v <= ts.pool.size(); ++v)
          if (std::find(ts.next_state_vars.begin(), ts.next_state_vars.end(), v) ==
              ts.next_state_vars.end())
            quantified.push_back(v);
        PqeOptions po;
        po.seed = entry.seed;
        po.conflict_budget = cfg.conflict_budget;
        po.wall_budget_secs = cfg.wall_per_row_secs;
        po.max_rounds = cfg.pqe_round_cap;
        PqeProblem qp;
        qp.f = ts.trans;
        qp.quantified = quantified;
        qp.free_vars = ts.next_state_vars;
        auto t0 = std::chrono::steady_clock::now();
        PqeSolution qsol = take_out(qp, po);
        if (!qsol.resource_out) {
          row.qe_secs = seconds_since(t0);
          ++summary.qe_solved;
        }

        // Size estimate for the states reachable from the excluded inputs
        // in one step (the complementary constraint conjoined onto T).
        CnfFormula excluded_side = ts.trans;
        for (const Lit& l : c.lits()) excluded_side.add_unit(~l);
        RangeEstimateOptions ro = cfg.range;
        ro.seed = entry.seed;
        try {
          row.log2_range_lb = estimate_range_size_log2(excluded_side, ts.next_state_vars, ro);
        } catch (const ResourceOutError&) {
          row.log2_range_lb = 0;
        }
      }
    } catch (const CrrError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return {std::move(rows), summary};
}

void write_experiment_csv(std::ostream& os, std::span<const ExperimentRow> rows) {
  os << "model,x_inputs,latches,gates,pqe_s,qe_s,h_empty,h_implied,log2_range_lb\n";
  for (const ExperimentRow& r : rows) {
    os << r.model << ',' << r.x_inputs << ',' << r.latches << ',' << r.gates << ',';
    if (!r.error.empty()) {
      os << "error,error,,,\n";
      continue;
    }
    if (r.pqe_secs < 0) os << "timeout,";
    else os << r.pqe_secs << ',';
    if (r.qe_secs < 0) os << "timeout,";
    else os << r.qe_secs << ',';
    os << (r.h_empty ? 1 : 0) << ',' << (r.h_implied ? 1 : 0) << ',' << r.log2_range_lb << '\n';
  }
}

std::string summary_json(const ExperimentSummary& s) {
  std::ostringstream os;
  os << "{\"rows\":" << s.rows << ",\"pqe_raw_solved\":" << s.pqe_raw_solved
     << ",\"pqe_expanded_solved\":" << s.pqe_expanded_solved << ",\"qe_solved\":" << s.qe_solved
     << ",\"h_empty\":" << s.h_empty_count << ",\"h_implied\":" << s.h_implied_count << "}";
  return os.str();
}

std::vector<ModelEntry> bundled_suite() {
  std::vector<ModelEntry> out;
  for (int k = 4; k <= 8; ++k) {
    out.push_back(ModelEntry{CounterSpec{k, (1 << k) / 2, CounterEncoding::kStandardBinary, 0},
                             static_cast<uint64_t>(100 + k)});
  }
  for (int k = 4; k <= 6; ++k) {
    out.push_back(ModelEntry{CounterSpec{k, (1 << k) / 2, CounterEncoding::kSeededPermutation,
                                         static_cast<uint64_t>(k)},
                             static_cast<uint64_t>(200 + k)});
  }
  // Wide random circuits: the quantified baseline has to cover the whole
  // next-state space and cannot finish under the row budget, while the
  // constrained take-out only visits successors of one excluded state.
  for (uint64_t s = 1; s <= 2; ++s)
    out.push_back(ModelEntry{RandomSystemSpec{32, 8, 80, s}, 300 + s});
  for (uint64_t s = 1; s <= 2; ++s)
    out.push_back(ModelEntry{RandomSystemSpec{36, 9, 100, s}, 400 + s});
  out.push_back(ModelEntry{RandomSystemSpec{40, 10, 120, 1}, 500});
  return out;
}

namespace {

uint64_t parse_u64(const std::string& s, const std::string& context) {
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("manifest: bad number '" + s + "' in " + context);
  }
}

std::unordered_map<std::string, std::string> parse_kv(const std::string& spec,
                                                      const std::string& context) {
  std::unordered_map<std::string, std::string> kv;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("manifest: expected key=value in " + context);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

}  // namespace

std::vector<ModelEntry> parse_manifest(std::istream& is) {
  std::vector<ModelEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string source;
    if (!(ls >> source)) continue;
    if (source[0] == '#') continue;
    uint64_t seed = 1;
    std::string seed_tok;
    if (ls >> seed_tok) seed = parse_u64(seed_tok, "line " + std::to_string(line_no));

    ModelEntry entry;
    entry.seed = seed;
    if (source.rfind("counter:", 0) == 0) {
      auto kv = parse_kv(source.substr(8), "line " + std::to_string(line_no));
      CounterSpec spec;
      if (!kv.count("k") || !kv.count("d"))
        throw ParseError("manifest line " + std::to_string(line_no) + ": counter needs k= and d=");
      spec.bits = static_cast<int>(parse_u64(kv["k"], "k"));
      spec.threshold = static_cast<int>(parse_u64(kv["d"], "d"));
      if (kv.count("perm")) {
        spec.encoding = CounterEncoding::kSeededPermutation;
        spec.permutation_seed = parse_u64(kv["perm"], "perm");
      }
      spec.validate();
      entry.source = spec;
    } else if (source.rfind("random:", 0) == 0) {
      auto kv = parse_kv(source.substr(7), "line " + std::to_string(line_no));
      RandomSystemSpec spec;
      if (kv.count("latches")) spec.latches = static_cast<int>(parse_u64(kv["latches"], "latches"));
      if (kv.count("inputs")) spec.inputs = static_cast<int>(parse_u64(kv["inputs"], "inputs"));
      if (kv.count("gates")) spec.gates = static_cast<int>(parse_u64(kv["gates"], "gates"));
      if (kv.count("seed")) spec.seed = parse_u64(kv["seed"], "seed");
      entry.source = spec;
    } else {
      entry.source = source;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace crr
