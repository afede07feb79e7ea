#include "crr/unroll.hpp"

namespace crr {

Unrolling::Unrolling(const TransitionSystem& ts) : ts_(&ts), pool_(ts.pool) {
  // Frame 0 aliases the base variables.
  frame_state_vars_.push_back(ts.state_vars);
  frame_input_vars_.push_back(ts.input_vars);
  std::unordered_map<Var, Var> identity;
  for (Var v = 1; v <= ts.pool.size(); ++v) identity[v] = v;
  frame_maps_.push_back(std::move(identity));
  frame_state_vars_.push_back(ts.next_state_vars);  // S_1 = base S'
}

void Unrolling::build_up_to(int j) {
  if (j < 0) throw StructureError("negative time frame");
  while (static_cast<int>(frame_maps_.size()) <= j) {
    int f = static_cast<int>(frame_maps_.size());
    std::unordered_map<Var, Var> map;
    // Current-state variables of frame f are the next-state variables of
    // frame f-1, already materialized.
    const std::vector<Var>& s_f = frame_state_vars_[static_cast<size_t>(f)];
    for (size_t i = 0; i < ts_->state_vars.size(); ++i) map[ts_->state_vars[i]] = s_f[i];

    std::vector<Var> x_f;
    for (Var x : ts_->input_vars) {
      Var copy = pool_.fresh(VarRole::kInput, f);
      x_f.push_back(copy);
      map[x] = copy;
    }
    frame_input_vars_.push_back(std::move(x_f));

    std::vector<Var> s_next;
    for (Var s : ts_->next_state_vars) {
      Var copy = pool_.fresh(VarRole::kState, f + 1);
      s_next.push_back(copy);
      map[s] = copy;
    }
    frame_state_vars_.push_back(std::move(s_next));

    for (Var v = 1; v <= ts_->pool.size(); ++v) {
      if (map.count(v)) continue;
      map[v] = pool_.fresh(ts_->pool.role(v), f);
    }
    frame_maps_.push_back(std::move(map));
  }
}

const std::unordered_map<Var, Var>& Unrolling::frame_map(int j) {
  build_up_to(j);
  return frame_maps_[static_cast<size_t>(j)];
}

const CnfFormula& Unrolling::t_frame(int j) {
  build_up_to(j);
  while (static_cast<int>(t_frames_.size()) <= j) {
    int f = static_cast<int>(t_frames_.size());
    t_frames_.push_back(rename_formula(ts_->trans, frame_maps_[static_cast<size_t>(f)]));
  }
  return t_frames_[static_cast<size_t>(j)];
}

std::span<const Var> Unrolling::state_vars(int j) {
  if (j > 0) build_up_to(j - 1);  // S_j materialized by frame j-1
  else build_up_to(j);
  return frame_state_vars_[static_cast<size_t>(j)];
}

std::span<const Var> Unrolling::input_vars(int j) {
  build_up_to(j);
  return frame_input_vars_[static_cast<size_t>(j)];
}

CnfFormula Unrolling::state_formula_at(const CnfFormula& f, int j) {
  std::span<const Var> s_j = state_vars(j);
  std::unordered_map<Var, Var> map;
  for (size_t i = 0; i < ts_->state_vars.size(); ++i) map[ts_->state_vars[i]] = s_j[i];
  return rename_formula(f, map);
}

Clause Unrolling::state_clause_at(const Clause& c, int j) {
  std::span<const Var> s_j = state_vars(j);
  std::unordered_map<Var, Var> map;
  for (size_t i = 0; i < ts_->state_vars.size(); ++i) map[ts_->state_vars[i]] = s_j[i];
  return rename_clause(c, map);
}

CnfFormula Unrolling::frame0_formula_at(const CnfFormula& f, int j) {
  return rename_formula(f, frame_map(j));
}

Clause Unrolling::input_clause_at(const Clause& c, int j) {
  return rename_clause(c, frame_map(j));
}

const CnfFormula& Unrolling::prop_good_at(int j) {
  build_up_to(j);
  while (static_cast<int>(prop_good_frames_.size()) <= j) {
    int f = static_cast<int>(prop_good_frames_.size());
    prop_good_frames_.push_back(rename_formula(ts_->prop_good, frame_maps_[static_cast<size_t>(f)]));
    prop_bad_frames_.push_back(rename_formula(ts_->prop_bad, frame_maps_[static_cast<size_t>(f)]));
  }
  return prop_good_frames_[static_cast<size_t>(j)];
}

const CnfFormula& Unrolling::prop_bad_at(int j) {
  prop_good_at(j);
  return prop_bad_frames_[static_cast<size_t>(j)];
}

std::vector<Var> Unrolling::quantified_through(int j) {
  build_up_to(j);
  std::vector<Var> out;
  std::span<const Var> free_vars = state_vars(j + 1);
  std::vector<bool> is_free(static_cast<size_t>(pool_.size()) + 1, false);
  for (Var v : free_vars) is_free[static_cast<size_t>(v)] = true;
  for (Var v = 1; v <= pool_.size(); ++v)
    if (!is_free[static_cast<size_t>(v)]) out.push_back(v);
  return out;
}

CnfFormula build_phi(Unrolling& u, int i, const CnfFormula& init,
                     std::span<const CnfFormula> h_formulas) {
  if (i > 0 && static_cast<int>(h_formulas.size()) < i)
    throw StructureError("build_phi needs constraint entries for frames 0.." + std::to_string(i - 1));
  CnfFormula phi = init;
  for (int m = 0; m < i; ++m) {
    if (m == 0)
      phi.add_all(u.frame0_formula_at(h_formulas[0], 0));
    else
      phi.add_all(u.state_formula_at(h_formulas[static_cast<size_t>(m)], m));
    phi.add_all(u.t_frame(m));
  }
  return phi;
}

}  // namespace crr
