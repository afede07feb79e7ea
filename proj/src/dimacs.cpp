#include "crr/dimacs.hpp"

#include <algorithm>
#include <sstream>

namespace crr {

void write_dimacs(std::ostream& os, const CnfFormula& f, Var num_vars) {
  Var v = std::max(num_vars, f.max_var());
  os << "p cnf " << v << ' ' << f.size() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Lit& l : c.lits()) os << l.code << ' ';
    os << "0\n";
  }
}

std::string to_dimacs(const CnfFormula& f, Var num_vars) {
  std::ostringstream os;
  write_dimacs(os, f, num_vars);
  return os.str();
}

DimacsProblem read_dimacs(std::istream& is) {
  DimacsProblem out;
  std::string tok;
  bool header_seen = false;
  std::vector<Lit> current;
  while (is >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      long long nv = 0, nc = 0;
      if (!(is >> fmt >> nv >> nc) || fmt != "cnf") throw ParseError("malformed DIMACS header");
      out.num_vars = static_cast<Var>(nv);
      header_seen = true;
      continue;
    }
    long long val = 0;
    try {
      val = std::stoll(tok);
    } catch (const std::exception&) {
      throw ParseError("unexpected DIMACS token '" + tok + "'");
    }
    if (!header_seen) throw ParseError("DIMACS clause before header");
    if (val == 0) {
      out.formula.add(Clause(current));
      current.clear();
    } else {
      Var v = static_cast<Var>(val < 0 ? -val : val);
      if (v > out.num_vars) throw ParseError("DIMACS literal exceeds declared variable count");
      current.push_back(Lit(v, val < 0));
    }
  }
  if (!current.empty()) throw ParseError("DIMACS input ends inside a clause");
  if (!header_seen) throw ParseError("missing DIMACS header");
  return out;
}

DimacsProblem read_dimacs(const std::string& text) {
  std::istringstream is(text);
  return read_dimacs(is);
}

}  // namespace crr
