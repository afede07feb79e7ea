// End-to-end checks of the crrmc binary: exit-code contract, output
// determinism, and the documented failure modes. Takes the binary path as
// argv[1] and uses a scratch directory next to the current working dir.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::cout << "ok: " << what << '\n';
  } else {
    std::cout << "FAIL: " << what << '\n';
    ++failures;
  }
}

int run(const std::string& cmd) {
  int raw = std::system(cmd.c_str());
  if (raw == -1) return -1;
  return WEXITSTATUS(raw);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <crrmc-binary>\n";
    return 2;
  }
  std::string bin = argv[1];
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "crrmc_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto path = [&](const std::string& name) { return (dir / name).string(); };

  // Exit 10 with a trace of the threshold length on a failing counter.
  int rc = run(bin + " check --counter k=3,d=3 --n 5 --out " + path("fail.json") + " --stim " +
               path("fail.stim") + " > /dev/null 2>&1");
  expect(rc == 10, "failing counter exits 10");
  std::string fail_json = slurp(path("fail.json"));
  expect(fail_json.find("\"verdict\": \"counterexample\"") != std::string::npos,
         "verdict json says counterexample");
  expect(fail_json.find("\"trace\"") != std::string::npos, "verdict json carries a trace");
  {
    std::string stim = slurp(path("fail.stim"));
    int lines = 0;
    for (char c : stim)
      if (c == '\n') ++lines;
    expect(lines == 3, "stimulus has one input line per frame");
  }

  // Exit 20 when the property holds for the bound.
  rc = run(bin + " check --counter k=3,d=5 --n 3 --out " + path("hold.json") + " > /dev/null 2>&1");
  expect(rc == 20, "holding counter exits 20");
  expect(slurp(path("hold.json")).find("holds") != std::string::npos, "verdict json says holds");

  // Identical invocations give byte-identical verdicts.
  rc = run(bin + " check --counter k=3,d=3 --n 5 --out " + path("fail2.json") + " > /dev/null 2>&1");
  expect(rc == 10 && slurp(path("fail2.json")) == fail_json,
         "check reruns are byte-identical");
  rc = run(bin + " check --counter k=2,d=1 --n 2 --conflicts 0 > /dev/null 2>&1");
  expect(rc == 1, "non-positive conflict budget exits 1");

  // The BMC engine agrees through the same interface.
  rc = run(bin + " check --engine bmc --counter k=3,d=3 --n 5 --out " + path("bmc.json") +
           " > /dev/null 2>&1");
  expect(rc == 10, "bmc engine exits 10 on the failing counter");

  // Usage errors exit 1.
  rc = run(bin + " check " + path("missing.aag") + " --n 4 > /dev/null 2>&1");
  expect(rc == 1, "missing model file exits 1");
  rc = run(bin + " check --counter k=2,d=4 --n 1 > /dev/null 2>&1");
  expect(rc == 1, "out-of-range counter threshold exits 1");
  rc = run(bin + " check --counter k=2,d=1 --n 1 --engine frobnicate > /dev/null 2>&1");
  expect(rc == 1, "unknown engine exits 1");
  rc = run(bin + " check --counter k=2,d=1 --n 1 --no-such-flag > /dev/null 2>&1");
  expect(rc == 1, "unknown flag exits 1");
  rc = run(bin + " frobnicate > /dev/null 2>&1");
  expect(rc == 1, "unknown subcommand exits 1");
  {
    std::ofstream bad(path("bad.aag"));
    bad << "aig 1 0 1 1 0\n";
  }
  rc = run(bin + " check " + path("bad.aag") + " --n 2 > /dev/null 2>&1");
  expect(rc == 1, "binary AIGER input exits 1");

  // Resource exhaustion is exit 30.
  rc = run(bin + " check --counter k=3,d=3 --n 5 --wall-secs 0.000001 > /dev/null 2>&1");
  expect(rc == 30, "wall budget exhaustion exits 30");

  // gen-counter: parses back, is deterministic, and rejects bad specs.
  rc = run(bin + " gen-counter --counter k=3,d=3,perm=7 --out " + path("c1.aag"));
  expect(rc == 0, "gen-counter exits 0");
  rc = run(bin + " gen-counter --counter k=3,d=3,perm=7 --out " + path("c2.aag"));
  expect(rc == 0 && slurp(path("c1.aag")) == slurp(path("c2.aag")),
         "gen-counter output is byte-identical across runs");
  rc = run(bin + " gen-counter --counter k=2,d=4 --out " + path("c3.aag") + " 2> /dev/null");
  expect(rc == 1, "gen-counter rejects d >= 2^k");
  rc = run(bin + " check " + path("c1.aag") + " --n 5 > /dev/null 2>&1");
  expect(rc == 10, "generated counter round-trips through check with the grid verdict");
  rc = run(bin + " check " + path("c1.aag") + " --n 2 > /dev/null 2>&1");
  expect(rc == 20, "generated counter holds below the threshold");
  rc = run(bin + " gen-counter --counter k=3,d=3 --out " + path("std.aag"));
  expect(rc == 0, "standard counter generation exits 0");
  rc = run(bin + " check --engine bmc " + path("std.aag") + " --n 5 --out " + path("std.json") +
           " > /dev/null 2>&1");
  expect(rc == 10 && slurp(path("std.json")).find("\"trace\"") != std::string::npos,
         "baseline engine finds the generated counter's bug");

  // bench: empty manifest gives a header-only CSV and exit 0.
  { std::ofstream empty(path("empty.manifest")); }
  rc = run(bin + " bench " + path("empty.manifest") + " --out " + path("empty.csv") +
           " --summary " + path("empty.json") + " > /dev/null 2>&1");
  expect(rc == 0, "empty manifest exits 0");
  expect(slurp(path("empty.csv")) ==
             "model,x_inputs,latches,gates,pqe_s,qe_s,h_empty,h_implied,log2_range_lb\n",
         "empty manifest produces the header-only CSV");

  // bench: a small manifest with one broken row still completes.
  {
    std::ofstream m(path("small.manifest"));
    m << "counter:k=4,d=8 5\n";
    m << path("missing.aag") << " 1\n";
    m << "random:latches=4,inputs=2,gates=8,seed=3 7\n";
  }
  rc = run(bin + " bench " + path("small.manifest") + " --out " + path("small.csv") +
           " --summary " + path("small.json") + " --row-secs 10 > /dev/null 2>&1");
  expect(rc == 0, "manifest with one corrupt model exits 0");
  {
    std::string csv = slurp(path("small.csv"));
    int lines = 0;
    for (char c : csv)
      if (c == '\n') ++lines;
    expect(lines == 4, "csv has a row per manifest entry");
    expect(csv.find("error") != std::string::npos, "corrupt row is marked");
    expect(csv.find("counter_k4_d8") != std::string::npos, "good rows complete");
  }
  expect(slurp(path("small.json")).find("\"rows\":3") != std::string::npos,
         "summary counts all rows");

  // bench reruns agree on everything except the timing columns.
  rc = run(bin + " bench " + path("small.manifest") + " --out " + path("small2.csv") +
           " --summary " + path("small2.json") + " --row-secs 10 > /dev/null 2>&1");
  expect(rc == 0, "bench rerun exits 0");
  {
    std::istringstream a(slurp(path("small.csv"))), b(slurp(path("small2.csv")));
    std::string la, lb;
    bool same_shape = true;
    while (std::getline(a, la) && std::getline(b, lb)) {
      // Blank out the two timing fields (5th and 6th columns).
      auto strip = [](const std::string& line) {
        std::istringstream ls(line);
        std::string field, out;
        int idx = 0;
        while (std::getline(ls, field, ',')) {
          if (idx == 4 || idx == 5) field = "_";
          out += field + ",";
          ++idx;
        }
        return out;
      };
      if (strip(la) != strip(lb)) same_shape = false;
    }
    expect(same_shape, "non-timing CSV columns are identical across reruns");
  }

  std::cout << (failures == 0 ? "cli: all checks passed\n" : "cli: FAILURES\n");
  return failures == 0 ? 0 : 1;
}
