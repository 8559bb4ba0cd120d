#ifndef RELCOMP_ANALYSIS_HPP
#define RELCOMP_ANALYSIS_HPP

#include <optional>
#include <string>

#include "relcomp/formula.hpp"
#include "relcomp/partition.hpp"

namespace relcomp {

// Disjunction is read as !(!a & !b) throughout.
Partition eq_vars(const Formula& f);
Partition coeq_vars(const Formula& f);

bool is_positive(const Formula& f);
inline bool is_negative(const Formula& f) { return !is_positive(f); }

VarSet gen0(const Formula& f);
VarSet cogen0(const Formula& f);

// All five static facts in one pass.
struct VarInfo {
  Partition eq;
  Partition coeq;
  VarSet gen0;
  VarSet cogen0;
  bool positive = true;
};
VarInfo analyze(const Formula& f);

struct AllowedReport {
  bool allowed = true;
  VarSet fv;
  VarSet gen0;
  std::optional<Formula> failing;
  std::string reason;
};

// Checks every (exists x) psi subformula, innermost first and left to right,
// then FV = gen0 at the root.
AllowedReport is_allowed(const Formula& f);

}  // namespace relcomp

#endif  // RELCOMP_ANALYSIS_HPP
