#include "relcomp/compile.hpp"

#include "relcomp/error.hpp"
#include "relcomp/normalize.hpp"

namespace relcomp {

namespace {

RelExpr expr_rec(const Formula& f, const DatabaseScheme& scheme) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return RelExpr::dee();
    case FormulaKind::Atom:
      if (scheme.canonical(f.symbol()) != f.args())
        throw NormalizationError("atom is not the canonical atom of its relation");
      return RelExpr::base(f.symbol(), scheme);
    case FormulaKind::And: {
      const Formula l = f.left(), r = f.right();
      if (r.is(FormulaKind::Eq)) {
        const VarSet& fv = l.free_vars();
        Var a = r.lhs(), b = r.rhs();
        RelExpr e1 = expr_rec(l, scheme);
        if (fv.count(a) && fv.count(b)) return RelExpr::select(a, b, e1);
        if (!fv.count(a)) std::swap(a, b);
        if (!fv.count(a)) throw NormalizationError("equality touches no free variable");
        // a free, b new: copy column a under the name b.
        RelExpr copy = RelExpr::rename(b, a, RelExpr::project({a}, e1));
        return RelExpr::select(a, b, RelExpr::join(e1, copy));
      }
      if (r.is(FormulaKind::Not))
        return RelExpr::diff(expr_rec(l, scheme), expr_rec(r.child(), scheme));
      return RelExpr::join(expr_rec(l, scheme), expr_rec(r, scheme));
    }
    case FormulaKind::Or:
      return RelExpr::unite(expr_rec(f.left(), scheme), expr_rec(f.right(), scheme));
    case FormulaKind::Exists: {
      Var x = f.bound();
      const Formula body = f.child();
      if (body.is(FormulaKind::And) && body.right().is(FormulaKind::Eq)) {
        const Formula e = body.right();
        const Formula phi1 = body.left();
        if (e.lhs() == x || e.rhs() == x) {
          Var y = e.lhs() == x ? e.rhs() : e.lhs();
          if (y != x && phi1.free_vars().count(x) && !phi1.free_vars().count(y))
            return RelExpr::rename(y, x, expr_rec(phi1, scheme));
        }
      }
      VarSet keep = body.free_vars();
      keep.erase(x);
      return RelExpr::project(keep, expr_rec(body, scheme));
    }
    case FormulaKind::Eq:
    case FormulaKind::Not:
      break;
  }
  throw NormalizationError("formula is not normalized");
}

}  // namespace

RelExpr expr_of_normalized(const Formula& f, const DatabaseScheme& scheme) {
  if (!is_normalized(f, scheme)) throw NormalizationError("formula is not normalized");
  return expr_rec(f, scheme);
}

CompileResult compile_allowed(const Formula& f, const DatabaseScheme& scheme,
                              VarUniverse& universe) {
  validate(f, scheme);
  Formula n = normalize_allowed(f, scheme, universe);
  RelExpr e = expr_of_normalized(n, scheme);
  if (e.scheme() != f.free_vars())
    throw NormalizationError("compiled scheme differs from the free variables");
  return CompileResult{f, n, e, e.scheme()};
}

std::set<Atom> active_domain(const Structure& m, const DatabaseScheme& scheme) {
  std::set<Atom> out;
  for (const auto& sym : scheme.symbols())
    for (const auto& t : m.relation(sym)) out.insert(t.begin(), t.end());
  return out;
}

RelExpr active_domain_expr(const VarSet& s, const DatabaseScheme& scheme) {
  if (s.empty()) return RelExpr::dee();
  std::optional<RelExpr> out;
  for (Var v : s) {
    std::optional<RelExpr> column;
    for (const auto& sym : scheme.symbols()) {
      for (Var c : scheme.canonical(sym)) {
        RelExpr e = RelExpr::project({c}, RelExpr::base(sym, scheme));
        if (c != v) e = RelExpr::rename(v, c, e);
        column = column ? RelExpr::unite(*column, e) : e;
      }
    }
    if (!column) throw SchemeError("the active domain needs a relation of positive arity");
    out = out ? RelExpr::join(*out, *column) : *column;
  }
  return *out;
}

RelExpr expr_active(const Formula& f, const DatabaseScheme& scheme, VarUniverse& universe) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return RelExpr::dee();
    case FormulaKind::Atom: {
      Formula canon = Formula::atom(f.symbol(), scheme.canonical(f.symbol()));
      Formula n = canon.args() == f.args() ? canon : atom_rename(canon, f.args(), universe);
      return expr_of_normalized(n, scheme);
    }
    case FormulaKind::Eq:
      return RelExpr::select(f.lhs(), f.rhs(),
                             active_domain_expr({f.lhs(), f.rhs()}, scheme));
    case FormulaKind::Not:
      return RelExpr::diff(active_domain_expr(f.child().free_vars(), scheme),
                           expr_active(f.child(), scheme, universe));
    case FormulaKind::And:
      return RelExpr::join(expr_active(f.left(), scheme, universe),
                           expr_active(f.right(), scheme, universe));
    case FormulaKind::Or:
      return expr_active(
          Formula::neg(Formula::conj(Formula::neg(f.left()), Formula::neg(f.right()))), scheme,
          universe);
    case FormulaKind::Exists: {
      VarSet keep = f.child().free_vars();
      keep.erase(f.bound());
      return RelExpr::project(keep, expr_active(f.child(), scheme, universe));
    }
  }
  return RelExpr::dee();
}

std::size_t vars_needed(const Formula& f, const VarSet& extra) {
  std::size_t n = 0;
  for (Var v : all_vars(f)) n = std::max<std::size_t>(n, v.ord + 1);
  for (Var v : extra) n = std::max<std::size_t>(n, v.ord + 1);
  return n;
}

VerifyResult verify(const Formula& f, const RelExpr& e, const Structure& m,
                    const DatabaseScheme& scheme, std::size_t cap) {
  VerifyResult res;
  res.space_vars = vars_needed(f, e.scheme());
  ValuationSpace space(m.domain_size(), res.space_vars, cap);
  ValuationSet lhs = embed(eval_expr(e, m, scheme), space);
  ValuationSet rhs = eval_formula(f, m, space);
  if (lhs == rhs) return res;
  res.equal = false;
  ValuationSet only_f = rhs - lhs;
  ValuationSet only_e = lhs - rhs;
  if (!only_f.is_empty()) {
    res.witness = space.decode(only_f.indices().front());
    res.witness_in_formula = true;
  } else {
    res.witness = space.decode(only_e.indices().front());
  }
  return res;
}

}  // namespace relcomp
