// crrmc: bounded safety checking by range reduction, with a BMC baseline
// and the accompanying experiment harness.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "crr/bench.hpp"
#include "crr/bmc.hpp"
#include "crr/checker.hpp"
#include "crr/verdict_json.hpp"

namespace {

constexpr int kExitCounterexample = 10;
constexpr int kExitHolds = 20;
constexpr int kExitResourceOut = 30;
constexpr int kExitUsage = 1;

struct CommonArgs {
  uint64_t seed = 1;
  int64_t conflicts = crr::kDefaultConflictBudget;
  double wall_secs = 0;
  int verbosity = 0;
};

crr::CounterSpec parse_counter_arg(const std::string& arg) {
  crr::CounterSpec spec;
  bool have_k = false, have_d = false;
  std::istringstream is(arg);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw crr::ParseError("--counter expects k=..,d=..[,perm=SEED]");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    if (key == "k") { spec.bits = std::stoi(val); have_k = true; }
    else if (key == "d") { spec.threshold = std::stoi(val); have_d = true; }
    else if (key == "perm") {
      spec.encoding = crr::CounterEncoding::kSeededPermutation;
      spec.permutation_seed = std::stoull(val);
    } else throw crr::ParseError("--counter: unknown key '" + key + "'");
  }
  if (!have_k || !have_d) throw crr::ParseError("--counter needs both k= and d=");
  spec.validate();
  return spec;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw crr::ParseError("cannot write '" + path + "'");
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded model checking by computing range reduction"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  CommonArgs common;
  app.add_option("--seed", common.seed, "deterministic solver seed");
  app.add_option("--conflicts", common.conflicts, "conflict budget per solver call");
  app.add_option("--wall-secs", common.wall_secs, "wall-clock budget (0 = unlimited)");
  app.add_flag("-v,--verbose", common.verbosity, "more progress output");

  // check
  auto* check = app.add_subcommand("check", "check a property for n transitions");
  std::string check_model, check_counter, check_out, check_stim, check_engine = "crr";
  int check_n = 1;
  bool check_expand = false;
  check->add_option("model", check_model, "AIGER (aag) model path");
  check->add_option("--counter", check_counter, "abstract counter spec k=..,d=..[,perm=SEED]");
  check->add_option("--n", check_n, "transition bound")->required();
  check->add_option("--engine", check_engine, "crr | bmc")->capture_default_str();
  check->add_option("--out", check_out, "write verdict JSON here instead of stdout");
  check->add_option("--stim", check_stim, "write witness input lines here");
  check->add_flag("--expand-clauses", check_expand, "widen excluding clauses before the quantified step");

  // bench
  auto* bench = app.add_subcommand("bench", "run the experiment harness");
  std::string bench_manifest, bench_out, bench_summary;
  double bench_row_secs = 10.0;
  double bench_fraction = 1.0;
  bool bench_bundled = false;
  bench->add_option("manifest", bench_manifest, "manifest file: '<source> <seed>' per line");
  bench->add_flag("--bundled", bench_bundled, "use the built-in model suite");
  bench->add_option("--out", bench_out, "CSV output path (default stdout)");
  bench->add_option("--summary", bench_summary, "summary JSON path (default stdout)");
  bench->add_option("--row-secs", bench_row_secs, "wall budget per row")->capture_default_str();
  bench->add_option("--fraction", bench_fraction, "constraining-clause length fraction of |S|")
      ->capture_default_str();

  // gen-counter
  auto* gen = app.add_subcommand("gen-counter", "emit an abstract counter as ASCII AIGER");
  std::string gen_spec, gen_out;
  gen->add_option("--counter", gen_spec, "counter spec k=..,d=..[,perm=SEED]")->required();
  gen->add_option("--out", gen_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;  // every usage problem exits 1
  }

  try {
    if (check->parsed()) {
      if (check_model.empty() == check_counter.empty()) {
        std::cerr << "check: give exactly one of a model path or --counter\n";
        return kExitUsage;
      }
      if (common.conflicts <= 0 || common.wall_secs < 0) {
        std::cerr << "check: budgets must be positive\n";
        return kExitUsage;
      }
      crr::TransitionSystem ts = check_model.empty()
                                     ? crr::abstract_counter(parse_counter_arg(check_counter))
                                     : crr::load_aiger_file(check_model);
      crr::CheckOptions opt;
      opt.seed = common.seed;
      opt.conflict_budget = common.conflicts;
      opt.wall_budget_secs = common.wall_secs;
      opt.expand_excluding_clauses = check_expand;
      crr::Verdict v;
      if (check_engine == "crr") v = crr::mc_crr(ts, check_n, opt);
      else if (check_engine == "bmc") v = crr::bmc(ts, check_n, opt);
      else {
        std::cerr << "check: unknown engine '" << check_engine << "'\n";
        return kExitUsage;
      }
      if (common.verbosity > 0)
        std::cerr << "stats: pqe_calls=" << v.stats.pqe_calls << " sat_calls=" << v.stats.sat_calls
                  << " frames_collapsed=" << v.stats.frames_collapsed
                  << " clauses_learned=" << v.stats.clauses_learned << '\n';
      write_or_print(crr::verdict_to_json(v, ts), check_out);
      if (!check_stim.empty() && v.kind == crr::Verdict::Kind::kCounterexample)
        write_or_print(crr::trace_to_stimulus(v.cex, ts), check_stim);
      switch (v.kind) {
        case crr::Verdict::Kind::kCounterexample: return kExitCounterexample;
        case crr::Verdict::Kind::kHoldsBounded:
        case crr::Verdict::Kind::kHoldsByLoop: return kExitHolds;
        case crr::Verdict::Kind::kResourceOut: return kExitResourceOut;
      }
      return kExitUsage;
    }

    if (bench->parsed()) {
      std::vector<crr::ModelEntry> models;
      if (bench_bundled) {
        models = crr::bundled_suite();
      } else {
        if (bench_manifest.empty()) {
          std::cerr << "bench: give a manifest path or --bundled\n";
          return kExitUsage;
        }
        std::ifstream is(bench_manifest);
        if (!is) {
          std::cerr << "bench: cannot open '" << bench_manifest << "'\n";
          return kExitUsage;
        }
        models = crr::parse_manifest(is);
      }
      crr::ExperimentConfig cfg;
      cfg.wall_per_row_secs = bench_row_secs;
      cfg.conflict_budget = common.conflicts;
      cfg.clause_fraction = bench_fraction;
      auto [rows, summary] = crr::run_experiment(models, cfg);
      std::ostringstream csv;
      crr::write_experiment_csv(csv, rows);
      write_or_print(csv.str(), bench_out);
      write_or_print(crr::summary_json(summary), bench_summary);
      return 0;
    }

    if (gen->parsed()) {
      crr::TransitionSystem ts = crr::abstract_counter(parse_counter_arg(gen_spec));
      write_or_print(crr::to_aiger_text(ts), gen_out);
      return 0;
    }
  } catch (const crr::CrrError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
