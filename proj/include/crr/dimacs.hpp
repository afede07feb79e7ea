#pragma once

#include <iosfwd>
#include <string>

#include "crr/cnf.hpp"

namespace crr {

// Standard DIMACS CNF ("p cnf V C" header, zero-terminated clauses),
// used for debugging interchange and external cross-checking.
void write_dimacs(std::ostream& os, const CnfFormula& f, Var num_vars = 0);
std::string to_dimacs(const CnfFormula& f, Var num_vars = 0);

struct DimacsProblem {
  CnfFormula formula;
  Var num_vars = 0;
};

DimacsProblem read_dimacs(std::istream& is);
DimacsProblem read_dimacs(const std::string& text);

}  // namespace crr
