#include "crr/verdict_json.hpp"

#include <json.hpp>

namespace crr {

std::string bits_of(const Assignment& a, std::span<const Var> vars) {
  std::string out;
  out.reserve(vars.size());
  for (Var v : vars) {
    auto val = a.value(v);
    out.push_back(!val ? 'x' : (*val ? '1' : '0'));
  }
  return out;
}

std::string verdict_to_json(const Verdict& v, const TransitionSystem& ts) {
  nlohmann::json j;
  j["verdict"] = to_string(v.kind);
  j["bound"] = v.bound;
  nlohmann::json trace = nlohmann::json::array();
  for (const InputPair& p : v.cex.steps) {
    trace.push_back({{"state", bits_of(p.state, ts.state_vars)},
                     {"inputs", bits_of(p.input, ts.input_vars)}});
  }
  j["trace"] = std::move(trace);
  if (v.kind == Verdict::Kind::kHoldsByLoop) j["loop_index"] = v.loop_index;
  if (v.kind == Verdict::Kind::kResourceOut) j["phase"] = v.phase;
  j["stats"] = {{"pqe_calls", v.stats.pqe_calls},
                {"sat_calls", v.stats.sat_calls},
                {"frames_collapsed", v.stats.frames_collapsed},
                {"clauses_learned", v.stats.clauses_learned}};
  return j.dump(2);
}

std::string trace_to_stimulus(const Trace& t, const TransitionSystem& ts) {
  std::string out;
  for (const InputPair& p : t.steps) {
    out += bits_of(p.input, ts.input_vars);
    out += '\n';
  }
  return out;
}

}  // namespace crr
