#ifndef RELCOMP_COMPILE_HPP
#define RELCOMP_COMPILE_HPP

#include <optional>
#include <set>

#include "relcomp/formula.hpp"
#include "relcomp/relalg.hpp"
#include "relcomp/semantics.hpp"

namespace relcomp {

struct CompileResult {
  Formula input;
  Formula normalized;
  RelExpr expr;
  VarSet scheme;
};

// expr(f) for a normalized f. Throws NormalizationError otherwise.
RelExpr expr_of_normalized(const Formula& f, const DatabaseScheme& scheme);

// Allowedness check, normalization, translation.
CompileResult compile_allowed(const Formula& f, const DatabaseScheme& scheme,
                              VarUniverse& universe);

// A(M): atoms occurring in some relation of the scheme.
std::set<Atom> active_domain(const Structure& m, const DatabaseScheme& scheme);

// E_S with ||E_S||_M = A(M)^S; DEE for S empty.
RelExpr active_domain_expr(const VarSet& s, const DatabaseScheme& scheme);

// expr_i(f): the active-domain translation, exact for domain-independent f.
RelExpr expr_active(const Formula& f, const DatabaseScheme& scheme, VarUniverse& universe);

// Exact comparison of epsilon(||e||_M) with ||f||_M over the smallest
// valuation space holding every variable of f and S(e).
struct VerifyResult {
  bool equal = true;
  std::optional<Valuation> witness;
  bool witness_in_formula = false;  // which side holds the witness
  std::size_t space_vars = 0;
};
VerifyResult verify(const Formula& f, const RelExpr& e, const Structure& m,
                    const DatabaseScheme& scheme, std::size_t cap = kDefaultValuationCap);

// Number of leading universe variables needed to evaluate f and e together.
std::size_t vars_needed(const Formula& f, const VarSet& extra = {});

}  // namespace relcomp

#endif  // RELCOMP_COMPILE_HPP
