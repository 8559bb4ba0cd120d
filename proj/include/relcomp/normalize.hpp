#ifndef RELCOMP_NORMALIZE_HPP
#define RELCOMP_NORMALIZE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "relcomp/analysis.hpp"
#include "relcomp/error.hpp"
#include "relcomp/formula.hpp"
#include "relcomp/partition.hpp"

namespace relcomp {

class NotAllowedError : public Error {
 public:
  explicit NotAllowedError(AllowedReport report)
      : Error("formula is not allowed: " + report.reason), report_(std::move(report)) {}
  const AllowedReport& report() const { return report_; }

 private:
  AllowedReport report_;
};

// Canonical chaining: each class v1 < ... < vk yields (v1,v2), ..., (vk-1,vk).
struct MinRep {
  std::vector<std::pair<Var, Var>> pairs;
};
MinRep minimal_representation(const Partition& e);

// (x1 = y1) & ... & (xn = yn), or 1 when empty.
Formula eq_conjunction(const MinRep& rep);

// (exists X\Y) f | (exists Y\X) g with X = FV(f), Y = FV(g).
Formula star_or(const Formula& f, const Formula& g);

// f1 ~& f2: equalities for Eq(eq(f1 & f2) \ eq(gen(f1) & gen(f2))).
Formula conj_eq(const Formula& f1, const Formula& f2);

Formula gen(const Formula& f);
Formula cogen(const Formula& f);

// (exists x)1 -> 1; 1 & f, f & 1 -> f; 1 | f, f | 1 -> 1. Bottom up.
Formula simplify_tautology(const Formula& f);

// f when FV(f) = FV(g), otherwise f & (exists FV(f)) g.
Formula align(const Formula& f, const Formula& g);

bool is_normalized(const Formula& f, const DatabaseScheme& scheme);

// Rewrites a negation-free generator into an equivalent normalized formula
// with the same free variables: atoms become renamings of their canonical
// atom, and equalities are attached once one endpoint is free.
Formula normalize_generator(const Formula& g, const DatabaseScheme& scheme,
                            VarUniverse& universe);

// Semantics- and FV-preserving cleanup of a normalized formula: tautology
// rules, vacuous quantifiers, quantifier pushing over independent
// conjuncts, and dropping a conjunct (exists X) c whose conjuncts all occur
// next to it.
Formula simplify_normalized(const Formula& f);

struct NormCall {
  Formula phi;
  Formula psi;
  Formula result;
};

// norm(phi, psi). Fresh variables come from the universe. An optional trace
// observes every recursive call after it returns.
class Normalizer {
 public:
  Normalizer(const DatabaseScheme& scheme, VarUniverse& universe)
      : scheme_(scheme), universe_(universe) {}

  Formula norm(const Formula& phi, const Formula& psi);

  std::function<void(const NormCall&)> trace;

 private:
  Formula norm_rec(const Formula& phi, const Formula& psi);
  Formula norm_and(const Formula& a, const Formula& b, const Formula& psi);

  const DatabaseScheme& scheme_;
  VarUniverse& universe_;
};

Formula norm(const Formula& phi, const Formula& psi, const DatabaseScheme& scheme,
             VarUniverse& universe);

// The normalizing generator psi of an allowed formula.
Formula generator_for(const Formula& f, const DatabaseScheme& scheme, VarUniverse& universe);

// norm(f, gen(f)) for an allowed f, followed by simplify_normalized.
// Throws NotAllowedError, or NormalizationError if the result falls outside
// the normalized fragment.
Formula normalize_allowed(const Formula& f, const DatabaseScheme& scheme,
                          VarUniverse& universe,
                          const std::function<void(const NormCall&)>& trace = {});

}  // namespace relcomp

#endif  // RELCOMP_NORMALIZE_HPP
