#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crr {

// Variables are positive integers handed out by a VariablePool.
using Var = int32_t;
inline constexpr Var kNoVar = 0;
inline constexpr int kNoFrame = -1;

enum class VarRole : uint8_t { kState, kNextState, kInput, kInternal, kAuxiliary };

const char* to_string(VarRole role);

// A literal is a variable with a polarity, encoded DIMACS-style as +v / -v.
struct Lit {
  int32_t code = 0;

  Lit() = default;
  constexpr Lit(Var v, bool negated) : code(negated ? -v : v) {}

  static constexpr Lit positive(Var v) { return Lit(v, false); }
  static constexpr Lit negative(Var v) { return Lit(v, true); }

  constexpr Var var() const { return code < 0 ? -code : code; }
  constexpr bool negated() const { return code < 0; }
  constexpr Lit operator~() const {
    Lit l;
    l.code = -code;
    return l;
  }
  constexpr bool operator==(const Lit& o) const { return code == o.code; }
  constexpr bool operator!=(const Lit& o) const { return code != o.code; }
  // Orders by variable id first so clauses sort canonically.
  constexpr bool operator<(const Lit& o) const {
    if (var() != o.var()) return var() < o.var();
    return code < o.code;
  }
};

std::string to_string(Lit l);

struct CrrError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external input (AIGER, DIMACS, manifests).
struct ParseError : CrrError {
  using CrrError::CrrError;
};

// Ill-formed circuit or formula handed to an operation.
struct StructureError : CrrError {
  using CrrError::CrrError;
};

// A conflict/wall budget ran out. Callers turn this into an explicit
// ResourceOut verdict; it never silently degrades into a wrong answer.
struct ResourceOutError : CrrError {
  explicit ResourceOutError(const std::string& phase)
      : CrrError("resource budget exceeded in " + phase), phase(phase) {}
  std::string phase;
};

// Central registry of variables. Ids are dense, starting at 1.
class VariablePool {
 public:
  VariablePool() = default;

  Var fresh(VarRole role, int frame = kNoFrame) {
    info_.push_back(Info{role, frame});
    return static_cast<Var>(info_.size());
  }

  int size() const { return static_cast<int>(info_.size()); }

  bool contains(Var v) const { return v >= 1 && v <= size(); }

  VarRole role(Var v) const { return at(v).role; }
  int frame(Var v) const { return at(v).frame; }

  void set_role(Var v, VarRole role, int frame) { at(v) = Info{role, frame}; }

 private:
  struct Info {
    VarRole role;
    int frame;
  };

  Info& at(Var v) {
    if (!contains(v)) throw StructureError("variable " + std::to_string(v) + " not in pool");
    return info_[static_cast<size_t>(v) - 1];
  }
  const Info& at(Var v) const { return const_cast<VariablePool*>(this)->at(v); }

  std::vector<Info> info_;
};

}  // namespace crr
