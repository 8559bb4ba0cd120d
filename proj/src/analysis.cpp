#include "relcomp/analysis.hpp"

namespace relcomp {

VarInfo analyze(const Formula& f) {
  VarInfo out;
  switch (f.kind()) {
    case FormulaKind::Taut:
      return out;
    case FormulaKind::Atom:
      out.gen0 = VarSet(f.args().begin(), f.args().end());
      return out;
    case FormulaKind::Eq:
      out.eq = Partition::closure({{f.lhs(), f.rhs()}});
      return out;
    case FormulaKind::Not: {
      VarInfo c = analyze(f.child());
      out.eq = std::move(c.coeq);
      out.coeq = std::move(c.eq);
      out.gen0 = std::move(c.cogen0);
      out.cogen0 = std::move(c.gen0);
      out.positive = !c.positive;
      return out;
    }
    case FormulaKind::And: {
      VarInfo a = analyze(f.left());
      VarInfo b = analyze(f.right());
      out.eq = a.eq.join(b.eq);
      out.coeq = a.coeq.meet(b.coeq);
      out.gen0 = cl(out.eq, set_union(a.gen0, b.gen0));
      out.cogen0 = set_intersect(a.cogen0, b.cogen0);
      out.positive = a.positive || b.positive;
      return out;
    }
    case FormulaKind::Or: {
      VarInfo a = analyze(f.left());
      VarInfo b = analyze(f.right());
      out.eq = a.eq.meet(b.eq);
      out.coeq = a.coeq.join(b.coeq);
      out.gen0 = set_intersect(a.gen0, b.gen0);
      out.cogen0 = cl(out.coeq, set_union(a.cogen0, b.cogen0));
      out.positive = a.positive && b.positive;
      return out;
    }
    case FormulaKind::Exists: {
      VarInfo c = analyze(f.child());
      Var x = f.bound();
      out.eq = c.eq.isolate(x);
      out.coeq = c.coeq.isolate(x);
      out.gen0 = std::move(c.gen0);
      out.gen0.erase(x);
      out.cogen0 = std::move(c.cogen0);
      out.cogen0.erase(x);
      out.positive = c.positive;
      return out;
    }
  }
  return out;
}

Partition eq_vars(const Formula& f) { return analyze(f).eq; }
Partition coeq_vars(const Formula& f) { return analyze(f).coeq; }
bool is_positive(const Formula& f) { return analyze(f).positive; }
VarSet gen0(const Formula& f) { return analyze(f).gen0; }
VarSet cogen0(const Formula& f) { return analyze(f).cogen0; }

namespace {

// Post-order scan; returns false at the first bad quantifier.
bool scan_quantifiers(const Formula& f, AllowedReport& rep) {
  switch (f.kind()) {
    case FormulaKind::Taut:
    case FormulaKind::Atom:
    case FormulaKind::Eq:
      return true;
    case FormulaKind::Not:
      return scan_quantifiers(f.child(), rep);
    case FormulaKind::And:
    case FormulaKind::Or:
      return scan_quantifiers(f.left(), rep) && scan_quantifiers(f.right(), rep);
    case FormulaKind::Exists: {
      if (!scan_quantifiers(f.child(), rep)) return false;
      if (!gen0(f.child()).count(f.bound())) {
        rep.allowed = false;
        rep.failing = f;
        rep.reason = "quantified variable is not in gen0 of the quantifier body";
        return false;
      }
      return true;
    }
  }
  return true;
}

}  // namespace

AllowedReport is_allowed(const Formula& f) {
  AllowedReport rep;
  rep.fv = f.free_vars();
  rep.gen0 = gen0(f);
  if (!scan_quantifiers(f, rep)) return rep;
  if (rep.fv != rep.gen0) {
    rep.allowed = false;
    rep.failing = f;
    rep.reason = "free variables differ from gen0";
  }
  return rep;
}

}  // namespace relcomp
