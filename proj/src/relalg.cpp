#include "relcomp/relalg.hpp"

#include <algorithm>
#include <random>

#include "relcomp/error.hpp"

namespace relcomp {

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(VarSet scheme)
    : scheme_(std::move(scheme)), cols_(scheme_.begin(), scheme_.end()) {}

Relation Relation::dee() {
  Relation r{VarSet{}};
  r.insert(Tuple{});
  return r;
}

void Relation::insert(Tuple t) {
  if (t.size() != cols_.size())
    throw PreconditionError("tuple length does not match the relation scheme");
  tuples_.insert(std::move(t));
}

std::size_t Relation::column(Var x) const {
  auto it = std::lower_bound(cols_.begin(), cols_.end(), x);
  if (it == cols_.end() || *it != x)
    throw PreconditionError("variable outside the relation scheme");
  return static_cast<std::size_t>(it - cols_.begin());
}

Relation join(const Relation& a, const Relation& b) {
  Relation out(set_union(a.scheme(), b.scheme()));
  const auto& cols = out.columns();
  // For each output column: which input supplies it, and where.
  std::vector<int> from_a(cols.size(), -1), from_b(cols.size(), -1);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (a.scheme().count(cols[i])) from_a[i] = static_cast<int>(a.column(cols[i]));
    if (b.scheme().count(cols[i])) from_b[i] = static_cast<int>(b.column(cols[i]));
  }
  Tuple t(cols.size());
  for (const auto& ta : a.tuples())
    for (const auto& tb : b.tuples()) {
      bool ok = true;
      for (std::size_t i = 0; i < cols.size() && ok; ++i) {
        if (from_a[i] >= 0 && from_b[i] >= 0 && ta[from_a[i]] != tb[from_b[i]]) ok = false;
        t[i] = from_a[i] >= 0 ? ta[from_a[i]] : tb[from_b[i]];
      }
      if (ok) out.insert(t);
    }
  return out;
}

Relation project(const Relation& t, const VarSet& keep) {
  if (!subset_of(keep, t.scheme()))
    throw PreconditionError("projection onto variables outside the scheme");
  Relation out(keep);
  std::vector<std::size_t> pos;
  for (Var x : out.columns()) pos.push_back(t.column(x));
  for (const auto& row : t.tuples()) {
    Tuple r;
    r.reserve(pos.size());
    for (auto p : pos) r.push_back(row[p]);
    out.insert(std::move(r));
  }
  return out;
}

Relation select_eq(const Relation& t, Var x, Var y) {
  std::size_t px = t.column(x), py = t.column(y);
  Relation out(t.scheme());
  for (const auto& row : t.tuples())
    if (row[px] == row[py]) out.insert(row);
  return out;
}

Relation rename_attr(const Relation& t, Var x, Var y) {
  if (!t.scheme().count(x)) throw SchemeError("renamed variable outside the scheme");
  if (t.scheme().count(y)) throw SchemeError("rename target already in the scheme");
  VarSet s = t.scheme();
  s.erase(x);
  s.insert(y);
  Relation out(s);
  std::vector<std::size_t> pos;
  for (Var v : out.columns()) pos.push_back(t.column(v == y ? x : v));
  for (const auto& row : t.tuples()) {
    Tuple r;
    r.reserve(pos.size());
    for (auto p : pos) r.push_back(row[p]);
    out.insert(std::move(r));
  }
  return out;
}

Relation rel_union(const Relation& a, const Relation& b) {
  if (a.scheme() != b.scheme()) throw SchemeError("union of relations over different schemes");
  Relation out = a;
  for (const auto& t : b.tuples()) out.insert(t);
  return out;
}

Relation difference(const Relation& a, const Relation& b) {
  if (a.scheme() != b.scheme())
    throw SchemeError("difference of relations over different schemes");
  Relation out(a.scheme());
  for (const auto& t : a.tuples())
    if (!b.contains(t)) out.insert(t);
  return out;
}

// ---------------------------------------------------------------------------
// RelExpr

struct RelExpr::Node {
  ExprKind kind = ExprKind::Dee;
  std::string symbol;
  std::vector<Var> base_vars;
  VarSet keep;
  Var x, y;
  std::vector<RelExpr> kids;
  VarSet scheme;
  std::size_t size = 1;
};

namespace {

std::shared_ptr<RelExpr::Node> make(ExprKind k) {
  auto n = std::make_shared<RelExpr::Node>();
  n->kind = k;
  return n;
}

}  // namespace

RelExpr RelExpr::dee() { return RelExpr(make(ExprKind::Dee)); }

RelExpr RelExpr::base(const std::string& symbol, const DatabaseScheme& scheme) {
  auto n = make(ExprKind::Base);
  n->symbol = symbol;
  n->base_vars = scheme.canonical(symbol);
  n->scheme = VarSet(n->base_vars.begin(), n->base_vars.end());
  return RelExpr(n);
}

RelExpr RelExpr::unite(RelExpr l, RelExpr r) {
  if (l.scheme() != r.scheme()) throw SchemeError("union operands have different schemes");
  auto n = make(ExprKind::Union);
  n->scheme = l.scheme();
  n->size = 1 + l.size() + r.size();
  n->kids = {std::move(l), std::move(r)};
  return RelExpr(n);
}

RelExpr RelExpr::diff(RelExpr l, RelExpr r) {
  if (l.scheme() != r.scheme())
    throw SchemeError("difference operands have different schemes");
  auto n = make(ExprKind::Diff);
  n->scheme = l.scheme();
  n->size = 1 + l.size() + r.size();
  n->kids = {std::move(l), std::move(r)};
  return RelExpr(n);
}

RelExpr RelExpr::join(RelExpr l, RelExpr r) {
  auto n = make(ExprKind::Join);
  n->scheme = set_union(l.scheme(), r.scheme());
  n->size = 1 + l.size() + r.size();
  n->kids = {std::move(l), std::move(r)};
  return RelExpr(n);
}

RelExpr RelExpr::project(VarSet keep, RelExpr e) {
  if (!subset_of(keep, e.scheme()))
    throw SchemeError("projection onto variables outside the operand scheme");
  auto n = make(ExprKind::Project);
  n->scheme = keep;
  n->keep = std::move(keep);
  n->size = 1 + e.size();
  n->kids = {std::move(e)};
  return RelExpr(n);
}

RelExpr RelExpr::select(Var x, Var y, RelExpr e) {
  if (!e.scheme().count(x) || !e.scheme().count(y))
    throw SchemeError("selection on variables outside the operand scheme");
  auto n = make(ExprKind::Select);
  n->x = x;
  n->y = y;
  n->scheme = e.scheme();
  n->size = 1 + e.size();
  n->kids = {std::move(e)};
  return RelExpr(n);
}

RelExpr RelExpr::rename(Var y, Var x, RelExpr e) {
  if (!e.scheme().count(x)) throw SchemeError("renamed variable outside the operand scheme");
  if (e.scheme().count(y)) throw SchemeError("rename target already in the operand scheme");
  auto n = make(ExprKind::Rename);
  n->x = x;
  n->y = y;
  n->scheme = e.scheme();
  n->scheme.erase(x);
  n->scheme.insert(y);
  n->size = 1 + e.size();
  n->kids = {std::move(e)};
  return RelExpr(n);
}

ExprKind RelExpr::kind() const { return node_->kind; }
const VarSet& RelExpr::scheme() const { return node_->scheme; }
std::size_t RelExpr::size() const { return node_->size; }

namespace {

void expect_kind(bool ok, const char* what) {
  if (!ok) throw PreconditionError(std::string("RelExpr accessor ") + what + " on wrong node kind");
}

}  // namespace

const std::string& RelExpr::symbol() const {
  expect_kind(kind() == ExprKind::Base, "symbol");
  return node_->symbol;
}

const std::vector<Var>& RelExpr::base_vars() const {
  expect_kind(kind() == ExprKind::Base, "base_vars");
  return node_->base_vars;
}

const VarSet& RelExpr::keep() const {
  expect_kind(kind() == ExprKind::Project, "keep");
  return node_->keep;
}

Var RelExpr::x() const {
  expect_kind(kind() == ExprKind::Select || kind() == ExprKind::Rename, "x");
  return node_->x;
}

Var RelExpr::y() const {
  expect_kind(kind() == ExprKind::Select || kind() == ExprKind::Rename, "y");
  return node_->y;
}

RelExpr RelExpr::left() const {
  expect_kind(node_->kids.size() == 2, "left");
  return node_->kids[0];
}

RelExpr RelExpr::right() const {
  expect_kind(node_->kids.size() == 2, "right");
  return node_->kids[1];
}

RelExpr RelExpr::child() const {
  expect_kind(node_->kids.size() == 1, "child");
  return node_->kids[0];
}

bool operator==(const RelExpr& a, const RelExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.symbol != y.symbol || x.keep != y.keep || x.x != y.x ||
      x.y != y.y || x.scheme != y.scheme || x.kids.size() != y.kids.size())
    return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

VarSet recompute_scheme(const RelExpr& e) {
  switch (e.kind()) {
    case ExprKind::Dee:
      return {};
    case ExprKind::Base:
      return VarSet(e.base_vars().begin(), e.base_vars().end());
    case ExprKind::Union:
    case ExprKind::Diff:
      return recompute_scheme(e.left());
    case ExprKind::Join:
      return set_union(recompute_scheme(e.left()), recompute_scheme(e.right()));
    case ExprKind::Project:
      return e.keep();
    case ExprKind::Select:
      return recompute_scheme(e.child());
    case ExprKind::Rename: {
      VarSet s = recompute_scheme(e.child());
      s.erase(e.x());
      s.insert(e.y());
      return s;
    }
  }
  return {};
}

Relation eval_expr(const RelExpr& e, const Structure& m, const DatabaseScheme& scheme) {
  switch (e.kind()) {
    case ExprKind::Dee:
      return Relation::dee();
    case ExprKind::Base: {
      const auto& vars = scheme.canonical(e.symbol());
      if (vars != e.base_vars())
        throw SchemeError("base relation '" + e.symbol() + "' built against another scheme");
      Relation out(e.scheme());
      std::vector<std::size_t> pos;
      for (Var v : vars) pos.push_back(out.column(v));
      for (const auto& row : m.relation(e.symbol())) {
        if (row.size() != vars.size())
          throw SchemeError("tuple of '" + e.symbol() + "' has the wrong arity");
        Tuple t(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) t[pos[i]] = row[i];
        out.insert(std::move(t));
      }
      return out;
    }
    case ExprKind::Union:
      return rel_union(eval_expr(e.left(), m, scheme), eval_expr(e.right(), m, scheme));
    case ExprKind::Diff:
      return difference(eval_expr(e.left(), m, scheme), eval_expr(e.right(), m, scheme));
    case ExprKind::Join:
      return join(eval_expr(e.left(), m, scheme), eval_expr(e.right(), m, scheme));
    case ExprKind::Project:
      return project(eval_expr(e.child(), m, scheme), e.keep());
    case ExprKind::Select:
      return select_eq(eval_expr(e.child(), m, scheme), e.x(), e.y());
    case ExprKind::Rename:
      return rename_attr(eval_expr(e.child(), m, scheme), e.x(), e.y());
  }
  return Relation::dee();
}

// ---------------------------------------------------------------------------
// Embedding

ValuationSet embed(const Relation& t, const ValuationSpace& space) {
  for (Var x : t.scheme())
    if (x.ord >= space.nvars())
      throw PreconditionError("relation scheme reaches outside the valuation space");
  auto out = ValuationSet::empty(space);
  const auto& cols = t.columns();
  Tuple key(cols.size());
  for (std::size_t i = 0; i < space.count(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k)
      key[k] = static_cast<Atom>(space.digit(i, cols[k]));
    if (t.contains(key)) out.insert_index(i);
  }
  return out;
}

ValuationSet embed(const Relation& t, const Structure& m, const VarUniverse& u,
                   std::size_t cap) {
  return embed(t, ValuationSpace(m.domain_size(), u.size(), cap));
}

Relation project_valuations(const ValuationSet& v, const VarSet& xs) {
  const auto& space = v.space();
  Relation out(xs);
  const auto& cols = out.columns();
  for (Var x : cols)
    if (x.ord >= space.nvars())
      throw PreconditionError("projection onto a variable outside the valuation space");
  for (auto i : v.indices()) {
    Tuple t(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
      t[k] = static_cast<Atom>(space.digit(i, cols[k]));
    out.insert(std::move(t));
  }
  return out;
}

namespace {

VarSet random_scheme(std::mt19937_64& rng, std::size_t nvars) {
  VarSet s;
  std::bernoulli_distribution coin(0.5);
  for (std::uint32_t i = 0; i < nvars; ++i)
    if (coin(rng)) s.insert(Var{i});
  return s;
}

Relation random_relation(std::mt19937_64& rng, const VarSet& scheme, std::size_t m) {
  Relation r(scheme);
  std::size_t total = 1;
  for (std::size_t i = 0; i < scheme.size(); ++i) total *= m;
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  double p = dens(rng);
  std::bernoulli_distribution keep(p);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!keep(rng)) continue;
    Tuple t(scheme.size());
    std::size_t rest = idx;
    for (auto& a : t) {
      a = static_cast<Atom>(rest % m);
      rest /= m;
    }
    r.insert(std::move(t));
  }
  return r;
}

template <class T>
T pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

}  // namespace

EmbeddingReport check_embedding_identities(std::size_t domain_size, std::size_t nvars,
                                           std::size_t samples, std::uint64_t seed) {
  EmbeddingReport rep;
  rep.cases_per_clause = samples;
  ValuationSpace space(domain_size, nvars);
  std::mt19937_64 rng(seed);
  auto expect = [&](bool ok, const std::string& what) {
    ++rep.checks;
    if (!ok && rep.failures.size() < 32) rep.failures.push_back(what);
  };
  for (std::size_t k = 0; k < samples; ++k) {
    // Union and difference over one scheme.
    VarSet s = random_scheme(rng, nvars);
    auto t1 = random_relation(rng, s, domain_size);
    auto t2 = random_relation(rng, s, domain_size);
    auto e1 = embed(t1, space), e2 = embed(t2, space);
    expect(embed(rel_union(t1, t2), space) == (e1 | e2), "union clause");
    expect(embed(difference(t1, t2), space) == (e1 & e2.complement()), "difference clause");

    // Join over two unrelated schemes.
    VarSet s2 = random_scheme(rng, nvars);
    auto t3 = random_relation(rng, s2, domain_size);
    expect(embed(join(t1, t3), space) == (e1 & embed(t3, space)), "join clause");

    // Projection onto a random subscheme.
    VarSet keep;
    std::bernoulli_distribution coin(0.5);
    for (Var x : s)
      if (coin(rng)) keep.insert(x);
    expect(embed(project(t1, keep), space) == cylindrify_set(e1, set_minus(s, keep)),
           "projection clause");

    // Selection on two scheme variables, possibly equal.
    VarSet sel = s;
    if (sel.empty()) sel.insert(Var{0});
    auto tsel = sel == s ? t1 : random_relation(rng, sel, domain_size);
    auto esel = embed(tsel, space);
    std::vector<Var> in(sel.begin(), sel.end());
    Var x = pick(rng, in), y = pick(rng, in);
    expect(embed(select_eq(tsel, x, y), space) == (esel & diagonal(space, x, y)),
           "selection clause");

    // Renaming needs x inside the scheme and y outside it.
    if (nvars >= 2) {
      VarSet rs = random_scheme(rng, nvars);
      std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(nvars - 1));
      if (rs.size() == nvars) rs.erase(Var{any(rng)});
      if (rs.empty()) rs.insert(Var{any(rng)});
      std::vector<Var> inside(rs.begin(), rs.end()), outside;
      for (std::uint32_t i = 0; i < nvars; ++i)
        if (!rs.count(Var{i})) outside.push_back(Var{i});
      auto tr = random_relation(rng, rs, domain_size);
      Var rx = pick(rng, inside), ry = pick(rng, outside);
      expect(embed(rename_attr(tr, rx, ry), space) ==
                 cylindrify(embed(tr, space) & diagonal(space, rx, ry), rx),
             "rename clause");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Back-translation and printing

Formula formula_of_expr(const RelExpr& e, const DatabaseScheme& scheme) {
  switch (e.kind()) {
    case ExprKind::Dee:
      return Formula::taut();
    case ExprKind::Base:
      return Formula::atom(e.symbol(), scheme.canonical(e.symbol()));
    case ExprKind::Union:
      return Formula::disj(formula_of_expr(e.left(), scheme), formula_of_expr(e.right(), scheme));
    case ExprKind::Diff:
      return Formula::conj(formula_of_expr(e.left(), scheme),
                           Formula::neg(formula_of_expr(e.right(), scheme)));
    case ExprKind::Join:
      return Formula::conj(formula_of_expr(e.left(), scheme), formula_of_expr(e.right(), scheme));
    case ExprKind::Project:
      return exists_all(set_minus(e.child().scheme(), e.keep()),
                        formula_of_expr(e.child(), scheme));
    case ExprKind::Select:
      return Formula::conj(formula_of_expr(e.child(), scheme), Formula::eq(e.x(), e.y()));
    case ExprKind::Rename:
      return Formula::exists(
          e.x(), Formula::conj(formula_of_expr(e.child(), scheme), Formula::eq(e.x(), e.y())));
  }
  return Formula::taut();
}

namespace {

void print(const RelExpr& e, const VarUniverse& u, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(e.left(), u, out);
    out += ' ';
    out += op;
    out += ' ';
    print(e.right(), u, out);
    out += ')';
  };
  switch (e.kind()) {
    case ExprKind::Dee:
      out += "DEE";
      return;
    case ExprKind::Base:
      out += e.symbol();
      return;
    case ExprKind::Union:
      binary("union");
      return;
    case ExprKind::Diff:
      binary("minus");
      return;
    case ExprKind::Join:
      binary("join");
      return;
    case ExprKind::Project: {
      out += "project{";
      bool first = true;
      for (Var v : e.keep()) {
        if (!first) out += ',';
        first = false;
        out += u.name(v);
      }
      out += "}(";
      print(e.child(), u, out);
      out += ')';
      return;
    }
    case ExprKind::Select:
      out += "select{" + u.name(e.x()) + "=" + u.name(e.y()) + "}(";
      print(e.child(), u, out);
      out += ')';
      return;
    case ExprKind::Rename:
      out += "rename{" + u.name(e.y()) + "<-" + u.name(e.x()) + "}(";
      print(e.child(), u, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const RelExpr& e, const VarUniverse& u) {
  std::string out;
  print(e, u, out);
  return out;
}

}  // namespace relcomp
