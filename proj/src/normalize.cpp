#include "relcomp/normalize.hpp"

#include <algorithm>
#include <optional>

namespace relcomp {

MinRep minimal_representation(const Partition& e) {
  MinRep rep;
  for (const auto& c : e.classes())
    for (std::size_t i = 0; i + 1 < c.size(); ++i) rep.pairs.emplace_back(c[i], c[i + 1]);
  return rep;
}

Formula eq_conjunction(const MinRep& rep) {
  std::vector<Formula> parts;
  for (auto [x, y] : rep.pairs) parts.push_back(Formula::eq(x, y));
  return conj_all(parts);
}

Formula star_or(const Formula& f, const Formula& g) {
  const VarSet& x = f.free_vars();
  const VarSet& y = g.free_vars();
  return Formula::disj(exists_all(set_minus(x, y), f), exists_all(set_minus(y, x), g));
}

namespace {

// Pairs of eq(f1 & f2) missing from eq(g1 & g2), re-closed.
Partition eq_difference(const Formula& f1, const Formula& f2, const Formula& g1,
                        const Formula& g2) {
  Partition whole = eq_vars(Formula::conj(f1, f2));
  Partition gens = eq_vars(Formula::conj(g1, g2));
  std::vector<std::pair<Var, Var>> diff;
  for (auto [x, y] : whole.pairs())
    if (!gens.same(x, y)) diff.emplace_back(x, y);
  return Partition::closure(diff);
}

// The equalities kept inside gen(f1 & f2): only classes that reach a free
// variable of the two generators, so FV(gen) stays equal to gen0.
Formula gen_conj_eq(const Formula& f1, const Formula& f2, const Formula& g1,
                    const Formula& g2) {
  Partition d = eq_difference(f1, f2, g1, g2);
  VarSet anchor = set_union(g1.free_vars(), g2.free_vars());
  std::vector<std::pair<Var, Var>> kept;
  for (auto [x, y] : minimal_representation(d).pairs)
    if (!set_intersect(cl(d, {x}), anchor).empty()) kept.emplace_back(x, y);
  return eq_conjunction(MinRep{kept});
}

struct GenPair {
  Formula gen;
  Formula cogen;
};

Formula conj3(const Formula& a, const Formula& b, const Formula& c) {
  return simplify_tautology(Formula::conj(Formula::conj(a, b), c));
}

GenPair gen_rec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return {Formula::taut(), Formula::taut()};
    case FormulaKind::Atom:
      return {f, Formula::taut()};
    case FormulaKind::Eq:
      return {Formula::taut(), Formula::taut()};
    case FormulaKind::Not: {
      GenPair c = gen_rec(f.child());
      return {c.cogen, c.gen};
    }
    case FormulaKind::And: {
      GenPair a = gen_rec(f.left());
      GenPair b = gen_rec(f.right());
      return {conj3(a.gen, b.gen, gen_conj_eq(f.left(), f.right(), a.gen, b.gen)),
              simplify_tautology(star_or(a.cogen, b.cogen))};
    }
    case FormulaKind::Or: {
      // As !(!a & !b).
      GenPair a = gen_rec(f.left());
      GenPair b = gen_rec(f.right());
      Formula na = Formula::neg(f.left()), nb = Formula::neg(f.right());
      return {simplify_tautology(star_or(a.gen, b.gen)),
              conj3(a.cogen, b.cogen, gen_conj_eq(na, nb, a.cogen, b.cogen))};
    }
    case FormulaKind::Exists: {
      GenPair c = gen_rec(f.child());
      return {simplify_tautology(Formula::exists(f.bound(), c.gen)),
              simplify_tautology(Formula::exists(f.bound(), c.cogen))};
    }
  }
  return {Formula::taut(), Formula::taut()};
}

}  // namespace

Formula conj_eq(const Formula& f1, const Formula& f2) {
  Partition d = eq_difference(f1, f2, gen(f1), gen(f2));
  return eq_conjunction(minimal_representation(d));
}

Formula gen(const Formula& f) { return gen_rec(f).gen; }
Formula cogen(const Formula& f) { return gen_rec(f).cogen; }

Formula simplify_tautology(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Taut:
    case FormulaKind::Atom:
    case FormulaKind::Eq:
      return f;
    case FormulaKind::Not: {
      Formula c = simplify_tautology(f.child());
      return c == f.child() ? f : Formula::neg(c);
    }
    case FormulaKind::And: {
      Formula l = simplify_tautology(f.left());
      Formula r = simplify_tautology(f.right());
      if (l.is(FormulaKind::Taut)) return r;
      if (r.is(FormulaKind::Taut)) return l;
      return l == f.left() && r == f.right() ? f : Formula::conj(l, r);
    }
    case FormulaKind::Or: {
      Formula l = simplify_tautology(f.left());
      Formula r = simplify_tautology(f.right());
      if (l.is(FormulaKind::Taut) || r.is(FormulaKind::Taut)) return Formula::taut();
      return l == f.left() && r == f.right() ? f : Formula::disj(l, r);
    }
    case FormulaKind::Exists: {
      Formula c = simplify_tautology(f.child());
      if (c.is(FormulaKind::Taut)) return c;
      return c == f.child() ? f : Formula::exists(f.bound(), c);
    }
  }
  return f;
}

Formula align(const Formula& f, const Formula& g) {
  if (!subset_of(f.free_vars(), g.free_vars()))
    throw PreconditionError("align needs FV(f) to be a subset of FV(g)");
  if (f.free_vars() == g.free_vars()) return f;
  return Formula::conj(f, exists_all(f.free_vars(), g));
}

// ---------------------------------------------------------------------------
// Normalized form

namespace {

bool is_canonical_atom(const Formula& f, const DatabaseScheme& scheme) {
  return f.is(FormulaKind::Atom) && scheme.has(f.symbol()) &&
         scheme.canonical(f.symbol()) == f.args();
}

// x = y attaches to l when one endpoint is free in l.
bool eq_attaches(const Formula& l, const Formula& e) {
  return l.free_vars().count(e.lhs()) || l.free_vars().count(e.rhs());
}

// A conjunction that only the plain join rule covers.
bool is_join(const Formula& f) {
  return f.is(FormulaKind::And) && !f.right().is(FormulaKind::Not) &&
         !f.right().is(FormulaKind::Eq);
}

}  // namespace

bool is_normalized(const Formula& f, const DatabaseScheme& scheme) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return true;
    case FormulaKind::Atom:
      return is_canonical_atom(f, scheme);
    case FormulaKind::Eq:
    case FormulaKind::Not:
      return false;
    case FormulaKind::And: {
      const Formula l = f.left(), r = f.right();
      if (r.is(FormulaKind::Eq)) return eq_attaches(l, r) && is_normalized(l, scheme);
      if (r.is(FormulaKind::Not))
        return l.free_vars() == r.child().free_vars() && is_normalized(l, scheme) &&
               is_normalized(r.child(), scheme);
      return is_normalized(l, scheme) && is_normalized(r, scheme);
    }
    case FormulaKind::Or:
      return f.left().free_vars() == f.right().free_vars() && is_normalized(f.left(), scheme) &&
             is_normalized(f.right(), scheme);
    case FormulaKind::Exists:
      return is_normalized(f.child(), scheme);
  }
  return false;
}

namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.is(FormulaKind::And)) {
    flatten_and(f.left(), out);
    flatten_and(f.right(), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

Formula normalize_generator(const Formula& g, const DatabaseScheme& scheme,
                            VarUniverse& universe) {
  switch (g.kind()) {
    case FormulaKind::Taut:
      return g;
    case FormulaKind::Atom: {
      Formula canon = Formula::atom(g.symbol(), scheme.canonical(g.symbol()));
      if (canon.args() == g.args()) return canon;
      return atom_rename(canon, g.args(), universe);
    }
    case FormulaKind::Eq:
      throw NormalizationError(
          "a bare equality has no normalized form with the same free variables");
    case FormulaKind::Not:
      throw NormalizationError("generators contain no negation");
    case FormulaKind::Or: {
      Formula l = normalize_generator(g.left(), scheme, universe);
      Formula r = normalize_generator(g.right(), scheme, universe);
      if (l.free_vars() != r.free_vars())
        throw NormalizationError("disjunction operands with different free variables");
      return Formula::disj(l, r);
    }
    case FormulaKind::Exists: {
      Formula c = normalize_generator(g.child(), scheme, universe);
      if (!c.free_vars().count(g.bound())) return c;
      return Formula::exists(g.bound(), c);
    }
    case FormulaKind::And: {
      std::vector<Formula> parts;
      flatten_and(g, parts);
      std::vector<Formula> eqs;
      Formula cur = Formula::taut();
      bool have = false;
      for (const auto& p : parts) {
        if (p.is(FormulaKind::Eq)) {
          eqs.push_back(p);
          continue;
        }
        Formula n = normalize_generator(p, scheme, universe);
        if (n.is(FormulaKind::Taut)) continue;
        cur = have ? Formula::conj(cur, n) : n;
        have = true;
      }
      while (!eqs.empty()) {
        auto it = std::find_if(eqs.begin(), eqs.end(),
                               [&](const Formula& e) { return eq_attaches(cur, e); });
        if (it == eqs.end())
          throw NormalizationError("an equality in the generator touches no free variable");
        // Keep the free endpoint on the left.
        Formula e = cur.free_vars().count(it->lhs()) ? *it : Formula::eq(it->rhs(), it->lhs());
        cur = Formula::conj(cur, e);
        eqs.erase(it);
      }
      return cur;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Cleanup of normalized formulas

namespace {

// Conjuncts of f, looking through joins and equality attachments but not
// through `l & !r`.
void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.is(FormulaKind::And) && !f.right().is(FormulaKind::Not)) {
    flatten_conjuncts(f.left(), out);
    flatten_conjuncts(f.right(), out);
  } else {
    out.push_back(f);
  }
}

// p is (exists X) c, X possibly empty, with every conjunct of c among `others`.
bool implied_by(const Formula& p, const std::vector<Formula>& others) {
  if (std::find(others.begin(), others.end(), p) != others.end()) return true;
  Formula cur = p;
  while (cur.is(FormulaKind::Exists)) cur = cur.child();
  std::vector<Formula> cs;
  flatten_conjuncts(cur, cs);
  return std::all_of(cs.begin(), cs.end(), [&](const Formula& c) {
    return c.is(FormulaKind::Taut) || std::find(others.begin(), others.end(), c) != others.end();
  });
}

// Drops tautologies and conjuncts implied by the remaining ones, then joins
// the rest and attaches equalities once an endpoint is free. Nothing when
// the equalities cannot all be attached.
std::optional<Formula> rebuild_conjunction(const std::vector<Formula>& parts) {
  std::vector<Formula> kept;
  for (const auto& p : parts)
    if (!p.is(FormulaKind::Taut)) kept.push_back(p);
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<Formula> others = kept;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
    if (!others.empty() && implied_by(kept[i], others)) {
      kept = std::move(others);
    } else {
      ++i;
    }
  }
  std::vector<Formula> body, eqs;
  for (const auto& p : kept) (p.is(FormulaKind::Eq) ? eqs : body).push_back(p);
  if (body.empty()) {
    if (eqs.empty()) return Formula::taut();
    return std::nullopt;
  }
  Formula cur = conj_all(body);
  bool progress = true;
  while (!eqs.empty() && progress) {
    progress = false;
    for (auto it = eqs.begin(); it != eqs.end(); ++it) {
      if (!eq_attaches(cur, *it)) continue;
      cur = Formula::conj(cur, *it);
      eqs.erase(it);
      progress = true;
      break;
    }
  }
  if (!eqs.empty()) return std::nullopt;
  return cur;
}

Formula simplify_rec(const Formula& f);

Formula simplify_exists(Var x, const Formula& body) {
  if (body.is(FormulaKind::Taut)) return body;
  if (!body.free_vars().count(x)) return body;
  if (is_join(body)) {
    const Formula b1 = body.left(), b2 = body.right();
    if (!b2.free_vars().count(x))
      return simplify_rec(Formula::conj(simplify_exists(x, b1), b2));
    if (!b1.free_vars().count(x))
      return simplify_rec(Formula::conj(b1, simplify_exists(x, b2)));
  }
  return Formula::exists(x, body);
}

Formula simplify_rec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Taut:
    case FormulaKind::Atom:
    case FormulaKind::Eq:
      return f;
    case FormulaKind::Not:
      return Formula::neg(simplify_rec(f.child()));
    case FormulaKind::Or: {
      Formula l = simplify_rec(f.left());
      Formula r = simplify_rec(f.right());
      if (l.is(FormulaKind::Taut) || r.is(FormulaKind::Taut)) return Formula::taut();
      return Formula::disj(l, r);
    }
    case FormulaKind::Exists:
      return simplify_exists(f.bound(), simplify_rec(f.child()));
    case FormulaKind::And: {
      Formula l = simplify_rec(f.left());
      Formula r = simplify_rec(f.right());
      // 1 & !p stays: dropping the 1 would leave a bare negation.
      if (r.is(FormulaKind::Not)) return Formula::conj(l, r);
      std::vector<Formula> parts;
      flatten_conjuncts(l, parts);
      flatten_conjuncts(r, parts);
      if (auto g = rebuild_conjunction(parts)) return *g;
      return Formula::conj(l, r);
    }
  }
  return f;
}

}  // namespace

Formula simplify_normalized(const Formula& f) { return simplify_rec(f); }

// ---------------------------------------------------------------------------
// norm

Formula Normalizer::norm(const Formula& phi, const Formula& psi) { return norm_rec(phi, psi); }

Formula Normalizer::norm_rec(const Formula& phi, const Formula& psi_in) {
  if (phi.free_vars() != psi_in.free_vars())
    throw PreconditionError("norm needs FV(phi) = FV(psi)");
  const Formula psi = simplify_tautology(psi_in);
  Formula result = Formula::taut();
  switch (phi.kind()) {
    case FormulaKind::Taut:
      result = psi;
      break;
    case FormulaKind::Atom: {
      Formula canon = Formula::atom(phi.symbol(), scheme_.canonical(phi.symbol()));
      result = canon.args() == phi.args() ? canon : atom_rename(canon, phi.args(), universe_);
      break;
    }
    case FormulaKind::Eq:
      result = Formula::conj(psi, phi);
      break;
    case FormulaKind::Not:
      result = complement(norm_rec(phi.child(), psi));
      break;
    case FormulaKind::Or:
      result = norm_rec(Formula::neg(Formula::conj(Formula::neg(phi.left()),
                                                   Formula::neg(phi.right()))),
                        psi);
      break;
    case FormulaKind::And:
      result = norm_and(phi.left(), phi.right(), psi);
      break;
    case FormulaKind::Exists: {
      Var x = phi.bound();
      Formula g = simplify_tautology(gen(phi.child()));
      VarSet xs = g.free_vars();
      xs.erase(x);
      Formula anchor = normalize_generator(exists_all(xs, g), scheme_, universe_);
      Formula psi2 = simplify_tautology(Formula::conj(anchor, psi));
      result = Formula::exists(x, norm_rec(phi.child(), psi2));
      break;
    }
  }
  if (trace) trace(NormCall{phi, psi, result});
  return result;
}

Formula Normalizer::norm_and(const Formula& a, const Formula& b, const Formula& psi) {
  const VarSet& fv = psi.free_vars();
  Formula psi1 = simplify_tautology(exists_all(set_minus(fv, a.free_vars()), psi));
  Formula psi2 = simplify_tautology(exists_all(set_minus(fv, b.free_vars()), psi));
  Formula a1 = norm_rec(a, psi1);
  Formula a2 = norm_rec(b, psi2);
  bool n1 = a1.is(FormulaKind::Not), n2 = a2.is(FormulaKind::Not);
  if (!n1 && !n2) return Formula::conj(a1, a2);
  if (!n1 && n2)
    return Formula::conj(align(a1, psi), Formula::neg(align(complement(a2), psi)));
  if (n1 && !n2)
    return Formula::conj(align(a2, psi), Formula::neg(align(complement(a1), psi)));
  return Formula::neg(Formula::disj(align(complement(a1), psi), align(complement(a2), psi)));
}

Formula norm(const Formula& phi, const Formula& psi, const DatabaseScheme& scheme,
             VarUniverse& universe) {
  return Normalizer(scheme, universe).norm(phi, psi);
}

Formula generator_for(const Formula& f, const DatabaseScheme& scheme, VarUniverse& universe) {
  return normalize_generator(simplify_tautology(gen(f)), scheme, universe);
}

Formula normalize_allowed(const Formula& f, const DatabaseScheme& scheme,
                          VarUniverse& universe,
                          const std::function<void(const NormCall&)>& trace) {
  AllowedReport rep = is_allowed(f);
  if (!rep.allowed) throw NotAllowedError(std::move(rep));
  Formula psi = generator_for(f, scheme, universe);
  Normalizer n(scheme, universe);
  n.trace = trace;
  Formula raw = n.norm(f, psi);
  // A negated result (only possible for sentences) is anchored by psi.
  if (raw.is(FormulaKind::Not)) raw = Formula::conj(psi, raw);
  if (!is_normalized(raw, scheme))
    throw NormalizationError("normalization left the normalized fragment: " +
                             to_string(raw, universe));
  Formula tidy = simplify_normalized(raw);
  if (tidy.free_vars() == raw.free_vars() && is_normalized(tidy, scheme)) return tidy;
  return raw;
}

}  // namespace relcomp
