#ifndef RELCOMP_TESTS_ORACLE_HPP
#define RELCOMP_TESTS_ORACLE_HPP

// Reference implementations used only by the tests. They share nothing with
// the library beyond the data types: satisfaction is checked one valuation at
// a time, relations are sets of maps, partitions are boolean matrices.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "relcomp/formula.hpp"
#include "relcomp/relalg.hpp"
#include "relcomp/semantics.hpp"

namespace oracle {

using relcomp::Atom;
using relcomp::Formula;
using relcomp::FormulaKind;
using relcomp::Structure;
using relcomp::Var;
using relcomp::VarSet;

using Assignment = std::map<Var, Atom>;

inline bool sat(const Formula& f, const Structure& m, Assignment& a) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return true;
    case FormulaKind::Atom: {
      relcomp::Tuple t;
      for (Var v : f.args()) t.push_back(a.at(v));
      const auto& rel = m.relation(f.symbol());
      return rel.find(t) != rel.end();
    }
    case FormulaKind::Eq:
      return a.at(f.lhs()) == a.at(f.rhs());
    case FormulaKind::Not:
      return !sat(f.child(), m, a);
    case FormulaKind::And:
      return sat(f.left(), m, a) && sat(f.right(), m, a);
    case FormulaKind::Or:
      return sat(f.left(), m, a) || sat(f.right(), m, a);
    case FormulaKind::Exists: {
      const Var x = f.bound();
      auto it = a.find(x);
      const bool had = it != a.end();
      const Atom saved = had ? it->second : 0;
      bool found = false;
      for (Atom d = 0; d < m.domain_size() && !found; ++d) {
        a[x] = d;
        found = sat(f.child(), m, a);
      }
      if (had) a[x] = saved;
      else a.erase(x);
      return found;
    }
  }
  return false;
}

// Every total valuation of the listed variables, as assignments.
inline std::vector<Assignment> assignments(const std::vector<Var>& vars, std::size_t m) {
  std::vector<Assignment> out;
  std::vector<Atom> digits(vars.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = digits[i];
    out.push_back(a);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == m) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

// ||f|| over the variables 0..n-1, as valuation vectors indexed by ord.
inline std::set<relcomp::Valuation> models(const Formula& f, const Structure& m, std::size_t n) {
  std::vector<Var> vars;
  for (std::uint32_t i = 0; i < n; ++i) vars.push_back(Var{i});
  std::set<relcomp::Valuation> out;
  for (auto a : assignments(vars, m.domain_size())) {
    if (!sat(f, m, a)) continue;
    relcomp::Valuation v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = a[Var{i}];
    out.insert(v);
  }
  return out;
}

inline std::set<relcomp::Valuation> as_set(const relcomp::ValuationSet& s) {
  auto vs = s.valuations();
  return {vs.begin(), vs.end()};
}

inline VarSet fv(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return {};
    case FormulaKind::Atom:
      return VarSet(f.args().begin(), f.args().end());
    case FormulaKind::Eq:
      return {f.lhs(), f.rhs()};
    case FormulaKind::Not:
      return fv(f.child());
    case FormulaKind::And:
    case FormulaKind::Or: {
      VarSet a = fv(f.left()), b = fv(f.right());
      a.insert(b.begin(), b.end());
      return a;
    }
    case FormulaKind::Exists: {
      VarSet a = fv(f.child());
      a.erase(f.bound());
      return a;
    }
  }
  return {};
}

// Satisfying assignments of the listed variables, which must cover FV(f).
// Bound variables never enter the enumeration, so large ords cost nothing.
inline std::set<Assignment> answers(const Formula& f, const Structure& m, const VarSet& vars) {
  std::set<Assignment> out;
  for (auto a : assignments(std::vector<Var>(vars.begin(), vars.end()), m.domain_size()))
    if (sat(f, m, a)) out.insert(a);
  return out;
}

inline std::uint32_t max_ord(const Formula& f) {
  std::uint32_t n = 0;
  for (Var v : relcomp::all_vars(f)) n = std::max(n, v.ord + 1);
  return n;
}

// Relations as sets of partial maps.
using Row = std::map<Var, Atom>;
struct Table {
  VarSet scheme;
  std::set<Row> rows;
};

inline Table from_relation(const relcomp::Relation& t) {
  Table out{t.scheme(), {}};
  for (const auto& tup : t.tuples()) {
    Row r;
    for (std::size_t i = 0; i < tup.size(); ++i) r[t.columns()[i]] = tup[i];
    out.rows.insert(r);
  }
  return out;
}

inline Table eval(const relcomp::RelExpr& e, const Structure& m) {
  using relcomp::ExprKind;
  switch (e.kind()) {
    case ExprKind::Dee:
      return {{}, {Row{}}};
    case ExprKind::Base: {
      const auto& vars = e.base_vars();
      Table out{VarSet(vars.begin(), vars.end()), {}};
      for (const auto& t : m.relation(e.symbol())) {
        Row r;
        for (std::size_t i = 0; i < vars.size(); ++i) r[vars[i]] = t[i];
        out.rows.insert(r);
      }
      return out;
    }
    case ExprKind::Union: {
      Table a = eval(e.left(), m), b = eval(e.right(), m);
      a.rows.insert(b.rows.begin(), b.rows.end());
      return a;
    }
    case ExprKind::Diff: {
      Table a = eval(e.left(), m), b = eval(e.right(), m);
      Table out{a.scheme, {}};
      for (const auto& r : a.rows)
        if (!b.rows.count(r)) out.rows.insert(r);
      return out;
    }
    case ExprKind::Join: {
      Table a = eval(e.left(), m), b = eval(e.right(), m);
      Table out{a.scheme, {}};
      out.scheme.insert(b.scheme.begin(), b.scheme.end());
      for (const auto& r : a.rows)
        for (const auto& s : b.rows) {
          bool ok = true;
          for (const auto& [v, x] : s)
            if (r.count(v) && r.at(v) != x) ok = false;
          if (!ok) continue;
          Row u = r;
          u.insert(s.begin(), s.end());
          out.rows.insert(u);
        }
      return out;
    }
    case ExprKind::Project: {
      Table a = eval(e.child(), m);
      Table out{e.keep(), {}};
      for (const auto& r : a.rows) {
        Row u;
        for (Var v : e.keep()) u[v] = r.at(v);
        out.rows.insert(u);
      }
      return out;
    }
    case ExprKind::Select: {
      Table a = eval(e.child(), m);
      Table out{a.scheme, {}};
      for (const auto& r : a.rows)
        if (r.at(e.x()) == r.at(e.y())) out.rows.insert(r);
      return out;
    }
    case ExprKind::Rename: {
      Table a = eval(e.child(), m);
      Table out{e.scheme(), {}};
      for (auto r : a.rows) {
        Atom val = r.at(e.x());
        r.erase(e.x());
        r[e.y()] = val;
        out.rows.insert(r);
      }
      return out;
    }
  }
  return {};
}

// epsilon(T) over the variables 0..n-1.
inline std::set<relcomp::Valuation> embed(const Table& t, std::size_t m, std::size_t n) {
  std::vector<Var> vars;
  for (std::uint32_t i = 0; i < n; ++i) vars.push_back(Var{i});
  std::set<relcomp::Valuation> out;
  for (auto a : assignments(vars, m)) {
    Row r;
    for (Var v : t.scheme) r[v] = a.at(v);
    if (!t.rows.count(r)) continue;
    relcomp::Valuation v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = a[Var{i}];
    out.insert(v);
  }
  return out;
}

// Equivalence closure over variables 0..n-1 by Warshall's algorithm.
using Matrix = std::vector<std::vector<bool>>;
inline Matrix closure(const std::vector<std::pair<Var, Var>>& pairs, std::size_t n) {
  Matrix r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [x, y] : pairs) r[x.ord][y.ord] = r[y.ord][x.ord] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace oracle

#endif  // RELCOMP_TESTS_ORACLE_HPP
