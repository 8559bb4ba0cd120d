#include "relcomp/formula.hpp"

#include <algorithm>
#include <iterator>

#include "relcomp/error.hpp"

namespace relcomp {

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VarSet set_minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

VarSet set_intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

bool subset_of(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---------------------------------------------------------------------------
// VarUniverse

VarUniverse::VarUniverse(const std::vector<std::string>& names) {
  for (const auto& n : names) intern(n);
}

Var VarUniverse::intern(std::string_view name) {
  if (auto v = find(name)) return *v;
  auto ord = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  fresh_.push_back(false);
  index_.emplace(std::string(name), ord);
  return Var{ord};
}

std::optional<Var> VarUniverse::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return Var{it->second};
}

const std::string& VarUniverse::name(Var v) const {
  if (v.ord >= names_.size())
    throw PreconditionError("variable #" + std::to_string(v.ord) +
                            " is not in the universe");
  return names_[v.ord];
}

std::vector<Var> VarUniverse::vars() const {
  std::vector<Var> out;
  for (std::uint32_t i = 0; i < names_.size(); ++i) out.push_back(Var{i});
  return out;
}

Var VarUniverse::fresh() {
  std::string name;
  do {
    name = "_z" + std::to_string(fresh_counter_++);
  } while (index_.count(name) != 0);
  Var v = intern(name);
  fresh_[v.ord] = true;
  return v;
}

bool VarUniverse::is_fresh(Var v) const {
  return v.ord < fresh_.size() && fresh_[v.ord];
}

std::vector<Var> VarUniverse::fresh_outside(const VarSet& avoid, std::size_t n) {
  std::vector<Var> out;
  for (std::uint32_t i = 0; i < names_.size() && out.size() < n; ++i) {
    Var v{i};
    if (fresh_[i] && avoid.count(v) == 0) out.push_back(v);
  }
  while (out.size() < n) out.push_back(fresh());
  return out;
}

// ---------------------------------------------------------------------------
// Signature and scheme

void Signature::declare(const std::string& symbol, std::size_t arity) {
  auto [it, inserted] = rels_.emplace(symbol, arity);
  if (!inserted && it->second != arity)
    throw SchemeError("relation '" + symbol + "' redeclared with arity " +
                      std::to_string(arity) + " (was " +
                      std::to_string(it->second) + ")");
}

std::optional<std::size_t> Signature::arity(std::string_view symbol) const {
  auto it = rels_.find(symbol);
  if (it == rels_.end()) return std::nullopt;
  return it->second;
}

void DatabaseScheme::declare(const std::string& symbol, std::vector<Var> vars) {
  VarSet distinct(vars.begin(), vars.end());
  if (distinct.size() != vars.size())
    throw SchemeError("canonical atom of '" + symbol +
                      "' must use pairwise distinct variables");
  auto it = canon_.find(symbol);
  if (it != canon_.end()) {
    if (it->second != vars)
      throw SchemeError("conflicting declarations of relation '" + symbol + "'");
    return;
  }
  sig_.declare(symbol, vars.size());
  canon_.emplace(symbol, std::move(vars));
}

const std::vector<Var>& DatabaseScheme::canonical(std::string_view symbol) const {
  auto it = canon_.find(symbol);
  if (it == canon_.end())
    throw SchemeError("unknown relation symbol '" + std::string(symbol) + "'");
  return it->second;
}

bool DatabaseScheme::has(std::string_view symbol) const {
  return canon_.find(symbol) != canon_.end();
}

std::vector<std::string> DatabaseScheme::symbols() const {
  std::vector<std::string> out;
  for (const auto& [name, vars] : canon_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  FormulaKind kind;
  std::string symbol;
  std::vector<Var> vars;
  std::vector<Formula> kids;
  VarSet fv;
  std::size_t depth = 1;
  std::size_t size = 1;
};

namespace {

std::shared_ptr<Formula::Node> make_node(FormulaKind k) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  return n;
}

}  // namespace

Formula Formula::taut() {
  static const Formula one{make_node(FormulaKind::Taut)};
  return one;
}

Formula Formula::atom(std::string symbol, std::vector<Var> args) {
  auto n = make_node(FormulaKind::Atom);
  n->symbol = std::move(symbol);
  n->fv = VarSet(args.begin(), args.end());
  n->vars = std::move(args);
  return Formula{std::move(n)};
}

Formula Formula::eq(Var x, Var y) {
  auto n = make_node(FormulaKind::Eq);
  n->vars = {x, y};
  n->fv = {x, y};
  return Formula{std::move(n)};
}

Formula Formula::neg(Formula f) {
  auto n = make_node(FormulaKind::Not);
  n->fv = f.free_vars();
  n->depth = f.depth() + 1;
  n->size = f.size() + 1;
  n->kids = {std::move(f)};
  return Formula{std::move(n)};
}

namespace {

std::shared_ptr<Formula::Node> binary(FormulaKind k, Formula l, Formula r) {
  auto n = make_node(k);
  n->fv = set_union(l.free_vars(), r.free_vars());
  n->depth = std::max(l.depth(), r.depth()) + 1;
  n->size = l.size() + r.size() + 1;
  n->kids = {std::move(l), std::move(r)};
  return n;
}

}  // namespace

Formula Formula::conj(Formula l, Formula r) {
  return Formula{binary(FormulaKind::And, std::move(l), std::move(r))};
}

Formula Formula::disj(Formula l, Formula r) {
  return Formula{binary(FormulaKind::Or, std::move(l), std::move(r))};
}

Formula Formula::exists(Var x, Formula body) {
  auto n = make_node(FormulaKind::Exists);
  n->vars = {x};
  n->fv = body.free_vars();
  n->fv.erase(x);
  n->depth = body.depth() + 1;
  n->size = body.size() + 1;
  n->kids = {std::move(body)};
  return Formula{std::move(n)};
}

FormulaKind Formula::kind() const { return node_->kind; }

namespace {

[[noreturn]] void wrong_kind(const char* what) {
  throw PreconditionError(std::string("formula accessor '") + what +
                          "' used on the wrong node kind");
}

}  // namespace

const std::string& Formula::symbol() const {
  if (kind() != FormulaKind::Atom) wrong_kind("symbol");
  return node_->symbol;
}

const std::vector<Var>& Formula::args() const {
  if (kind() != FormulaKind::Atom) wrong_kind("args");
  return node_->vars;
}

Var Formula::lhs() const {
  if (kind() != FormulaKind::Eq) wrong_kind("lhs");
  return node_->vars[0];
}

Var Formula::rhs() const {
  if (kind() != FormulaKind::Eq) wrong_kind("rhs");
  return node_->vars[1];
}

Var Formula::bound() const {
  if (kind() != FormulaKind::Exists) wrong_kind("bound");
  return node_->vars[0];
}

Formula Formula::child() const {
  if (kind() != FormulaKind::Not && kind() != FormulaKind::Exists)
    wrong_kind("child");
  return node_->kids[0];
}

Formula Formula::left() const {
  if (kind() != FormulaKind::And && kind() != FormulaKind::Or) wrong_kind("left");
  return node_->kids[0];
}

Formula Formula::right() const {
  if (kind() != FormulaKind::And && kind() != FormulaKind::Or) wrong_kind("right");
  return node_->kids[1];
}

const VarSet& Formula::free_vars() const { return node_->fv; }
std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::size() const { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.size != y.size || x.symbol != y.symbol ||
      x.vars != y.vars || x.kids.size() != y.kids.size())
    return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

const VarSet& free_vars(const Formula& f) { return f.free_vars(); }

Formula complement(const Formula& f) {
  if (f.is(FormulaKind::Not)) return f.child();
  return Formula::neg(f);
}

Formula exists_all(const VarSet& xs, const Formula& f) {
  Formula out = f;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out = Formula::exists(*it, out);
  return out;
}

Formula conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::taut();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::conj(out, parts[i]);
  return out;
}

Formula subst_chain(const Formula& f, const std::vector<std::pair<Var, Var>>& pairs) {
  Formula out = f;
  for (const auto& [x, y] : pairs)
    out = Formula::exists(x, Formula::conj(out, Formula::eq(x, y)));
  return out;
}

Formula atom_rename(const Formula& r_atom, const std::vector<Var>& targets,
                    VarUniverse& universe) {
  if (!r_atom.is(FormulaKind::Atom))
    throw PreconditionError("atom_rename expects a relation atom");
  const auto& xs = r_atom.args();
  if (xs.size() != targets.size())
    throw PreconditionError("atom_rename: target count differs from arity");
  VarSet avoid(xs.begin(), xs.end());
  if (avoid.size() != xs.size())
    throw PreconditionError("atom_rename: atom arguments must be pairwise distinct");
  avoid.insert(targets.begin(), targets.end());
  auto zs = universe.fresh_outside(avoid, xs.size());

  std::vector<std::pair<Var, Var>> pairs;
  for (std::size_t i = 0; i < xs.size(); ++i) pairs.emplace_back(xs[i], zs[i]);
  for (std::size_t i = 0; i < xs.size(); ++i) pairs.emplace_back(zs[i], targets[i]);
  return subst_chain(r_atom, pairs);
}

void validate(const Formula& f, const DatabaseScheme& scheme) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto arity = scheme.signature().arity(f.symbol());
      if (!arity) throw SchemeError("unknown relation symbol '" + f.symbol() + "'");
      if (*arity != f.args().size())
        throw SchemeError("arity mismatch for '" + f.symbol() + "': expected " +
                          std::to_string(*arity) + ", got " +
                          std::to_string(f.args().size()));
      return;
    }
    case FormulaKind::Not:
    case FormulaKind::Exists:
      validate(f.child(), scheme);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      validate(f.left(), scheme);
      validate(f.right(), scheme);
      return;
    default:
      return;
  }
}

VarSet all_vars(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return {};
    case FormulaKind::Atom:
    case FormulaKind::Eq:
      return f.free_vars();
    case FormulaKind::Not:
      return all_vars(f.child());
    case FormulaKind::Exists: {
      VarSet out = all_vars(f.child());
      out.insert(f.bound());
      return out;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      return set_union(all_vars(f.left()), all_vars(f.right()));
  }
  return {};
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

// Operand positions, loosest first. Quantifier bodies extend as far right as
// possible, so a quantifier is parenthesized in every operand position.
enum Ctx { kTop = 0, kOrLeft = 1, kAndLeft = 2, kUnary = 3 };

void print(const Formula& f, const VarUniverse& u, Ctx ctx, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      out += "1";
      return;
    case FormulaKind::Atom: {
      out += f.symbol();
      out += "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ", ";
        out += u.name(f.args()[i]);
      }
      out += ")";
      return;
    }
    case FormulaKind::Eq:
      out += u.name(f.lhs());
      out += " = ";
      out += u.name(f.rhs());
      return;
    case FormulaKind::Not:
      out += "!";
      print(f.child(), u, kUnary, out);
      return;
    case FormulaKind::And: {
      bool paren = ctx > kAndLeft;
      if (paren) out += "(";
      print(f.left(), u, kAndLeft, out);
      out += " & ";
      print(f.right(), u, kUnary, out);
      if (paren) out += ")";
      return;
    }
    case FormulaKind::Or: {
      bool paren = ctx > kOrLeft;
      if (paren) out += "(";
      print(f.left(), u, kOrLeft, out);
      out += " | ";
      print(f.right(), u, kAndLeft, out);
      if (paren) out += ")";
      return;
    }
    case FormulaKind::Exists: {
      bool paren = ctx > kTop;
      if (paren) out += "(";
      out += "exists";
      Formula g = f;
      while (g.is(FormulaKind::Exists)) {
        out += " ";
        out += u.name(g.bound());
        g = g.child();
      }
      out += ". ";
      print(g, u, kTop, out);
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f, const VarUniverse& universe) {
  std::string out;
  print(f, universe, kTop, out);
  return out;
}

std::string to_string(const VarSet& xs, const VarUniverse& universe) {
  std::string out = "{";
  bool first = true;
  for (Var v : xs) {
    if (!first) out += ", ";
    first = false;
    out += universe.name(v);
  }
  return out + "}";
}

}  // namespace relcomp
