#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crr/bmc.hpp"
#include "crr/checker.hpp"

namespace crr {

// Seeded clause over round(fraction * |S|) distinct state variables with
// seeded polarities; the constraining-clause generator for experiments.
Clause random_input_clause(const TransitionSystem& ts, double fraction, uint64_t seed);

struct RangeEstimateOptions {
  int max_models = 32;          // satisfying assignments enumerated
  uint64_t max_point_checks = 4096;  // per-cube verification budget
  uint64_t seed = 1;
  int64_t conflict_budget = kDefaultConflictBudget;
};

// Log2 lower bound on |{free-variable points extendable into g}|: enumerate
// models, widen each projection into a cube by dropping literals (descending
// variable id, one pass) whenever every completion stays inside the range,
// and report the widest cube found. Never exceeds the exact range size.
int estimate_range_size_log2(const CnfFormula& g, std::span<const Var> free_vars,
                             const RangeEstimateOptions& opt = {});

// Seeded random sequential circuit: AND gates over random literals, random
// next-state edges and resets, and a property cone restricted to state
// variables, flipped if needed so the initial state is good.
struct RandomSystemSpec {
  int latches = 4;
  int inputs = 1;
  int gates = 8;
  uint64_t seed = 1;

  std::string display_name() const;
};

TransitionSystem random_system(const RandomSystemSpec& spec);

// ---- Verdict grid -----------------------------------------------------

struct GridCell {
  int bits = 0;
  int threshold = 0;
  int bound = 0;
  CounterEncoding encoding = CounterEncoding::kStandardBinary;
  Verdict::Kind crr_kind;
  Verdict::Kind bmc_kind;
  size_t crr_cex_length = 0;
  size_t bmc_cex_length = 0;
  bool agree = false;  // fails-bits equal
};

std::vector<GridCell> counter_verdict_grid(std::span<const int> bit_widths, int max_bound,
                                           uint64_t perm_seed, const CheckOptions& opt = {});

// ---- Experiment harness ------------------------------------------------

struct ModelEntry {
  std::variant<std::string, CounterSpec, RandomSystemSpec> source;  // path or generator
  uint64_t seed = 1;

  std::string display_name() const;
};

struct ExperimentConfig {
  double clause_fraction = 1.0;
  double wall_per_row_secs = 10.0;
  int64_t conflict_budget = kDefaultConflictBudget;
  uint64_t pqe_round_cap = 0;  // 0 = derived from free-variable count
  RangeEstimateOptions range;
  bool discard_pure_noise = false;  // drop solutions implied by T instead of only flagging
};

struct ExperimentRow {
  std::string model;
  int x_inputs = 0;
  int latches = 0;
  int gates = 0;
  double pqe_secs = -1;        // raw take-out; negative = timeout
  double pqe_exp_secs = -1;    // clause expansion first
  double qe_secs = -1;
  bool h_empty = false;        // from the expanded method's solution
  bool h_implied = false;      // every solution clause implied by T
  int log2_range_lb = 0;
  std::string error;           // row-level failure, empty when fine
};

struct ExperimentSummary {
  int rows = 0;
  int pqe_raw_solved = 0;
  int pqe_expanded_solved = 0;
  int qe_solved = 0;
  int h_empty_count = 0;
  int h_implied_count = 0;
};

std::pair<std::vector<ExperimentRow>, ExperimentSummary> run_experiment(
    std::span<const ModelEntry> models, const ExperimentConfig& cfg);

// CSV with the fixed column set; timing columns are the only
// nondeterministic ones.
void write_experiment_csv(std::ostream& os, std::span<const ExperimentRow> rows);
std::string summary_json(const ExperimentSummary& s);

// The models run by default: counters over a spread of widths and
// encodings plus seeded random circuits large enough to separate the
// methods under the row budget.
std::vector<ModelEntry> bundled_suite();

// Manifest: one entry per line, "<source> <seed>", where source is a file
// path or "counter:k=..,d=..[,perm=SEED]" / "random:latches=..,inputs=..,
// gates=..,seed=..". Blank lines and '#' comments are skipped.
std::vector<ModelEntry> parse_manifest(std::istream& is);

TransitionSystem load_model(const ModelEntry& entry);

}  // namespace crr
