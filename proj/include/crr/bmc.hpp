#pragma once

#include "crr/checker.hpp"

namespace crr {

// Baseline bounded check: per depth i = 1..n, satisfiability of the
// unrolled formula init ∧ T_0 ∧ ... ∧ T_{i-1} ∧ ¬P@i. Depths are tried in
// order, so a returned counterexample is a shortest one.
Verdict bmc(const TransitionSystem& ts, int n, const CheckOptions& opt = {});

}  // namespace crr
