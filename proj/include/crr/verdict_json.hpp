#pragma once

#include <string>

#include "crr/checker.hpp"

namespace crr {

// Verdict as JSON: {verdict, bound, trace:[{state, inputs}], loop_index?,
// stats{pqe_calls, sat_calls, frames_collapsed, clauses_learned}}. State and
// input bits are strings in declared variable order.
std::string verdict_to_json(const Verdict& v, const TransitionSystem& ts);

// Witness in stimulus form: one line of input bits per frame.
std::string trace_to_stimulus(const Trace& t, const TransitionSystem& ts);

std::string bits_of(const Assignment& a, std::span<const Var> vars);

}  // namespace crr
