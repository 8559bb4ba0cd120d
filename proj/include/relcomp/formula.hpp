#ifndef RELCOMP_FORMULA_HPP
#define RELCOMP_FORMULA_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relcomp {

// A variable is its position in the universe's total order.
struct Var {
  std::uint32_t ord = 0;
  auto operator<=>(const Var&) const = default;
};

using VarSet = std::set<Var>;

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_minus(const VarSet& a, const VarSet& b);
VarSet set_intersect(const VarSet& a, const VarSet& b);
bool subset_of(const VarSet& a, const VarSet& b);

// The variable universe. Grows on demand: user names are interned in order of
// first appearance, fresh variables `_z0, _z1, ...` are appended at the end.
class VarUniverse {
 public:
  VarUniverse() = default;
  explicit VarUniverse(const std::vector<std::string>& names);

  Var intern(std::string_view name);
  std::optional<Var> find(std::string_view name) const;
  const std::string& name(Var v) const;
  std::size_t size() const { return names_.size(); }
  std::vector<Var> vars() const;

  Var fresh();
  bool is_fresh(Var v) const;

  // First `n` fresh variables outside `avoid`, allocating more when the
  // existing pool runs short. Pool members are reused across calls.
  std::vector<Var> fresh_outside(const VarSet& avoid, std::size_t n);

 private:
  std::vector<std::string> names_;
  std::vector<bool> fresh_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::uint32_t fresh_counter_ = 0;
};

class Signature {
 public:
  void declare(const std::string& symbol, std::size_t arity);
  std::optional<std::size_t> arity(std::string_view symbol) const;
  const std::map<std::string, std::size_t, std::less<>>& relations() const {
    return rels_;
  }

 private:
  std::map<std::string, std::size_t, std::less<>> rels_;
};

// One canonical atom r(x1..xn) with pairwise distinct variables per symbol.
class DatabaseScheme {
 public:
  // Re-declaring an identical atom is a no-op; anything else conflicting
  // throws SchemeError.
  void declare(const std::string& symbol, std::vector<Var> vars);

  const Signature& signature() const { return sig_; }
  const std::vector<Var>& canonical(std::string_view symbol) const;
  bool has(std::string_view symbol) const;
  std::vector<std::string> symbols() const;

 private:
  Signature sig_;
  std::map<std::string, std::vector<Var>, std::less<>> canon_;
};

enum class FormulaKind { Taut, Atom, Eq, Not, And, Or, Exists };

// Immutable formula tree with shared subterms. Copies are cheap.
class Formula {
 public:
  static Formula taut();
  static Formula atom(std::string symbol, std::vector<Var> args);
  static Formula eq(Var x, Var y);
  static Formula neg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula exists(Var x, Formula body);

  FormulaKind kind() const;
  bool is(FormulaKind k) const { return kind() == k; }

  const std::string& symbol() const;      // Atom
  const std::vector<Var>& args() const;   // Atom
  Var lhs() const;                        // Eq
  Var rhs() const;                        // Eq
  Var bound() const;                      // Exists
  Formula child() const;                  // Not, Exists
  Formula left() const;                   // And, Or
  Formula right() const;                  // And, Or

  const VarSet& free_vars() const;
  std::size_t depth() const;
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

const VarSet& free_vars(const Formula& f);

// Strips exactly one negation, or adds one.
Formula complement(const Formula& f);

// (exists x1)...(exists xn) f with x1 the least variable (outermost).
Formula exists_all(const VarSet& xs, const Formula& f);

// Left-associated conjunction; 1 for an empty list.
Formula conj_all(const std::vector<Formula>& parts);

// (f)[x1/y1, ..., xn/yn]: each step is (exists x)(f & x = y).
Formula subst_chain(const Formula& f, const std::vector<std::pair<Var, Var>>& pairs);

// r(x1/y1, ..., xn/yn) built with fresh z's disjoint from the x's and y's.
Formula atom_rename(const Formula& r_atom, const std::vector<Var>& targets,
                    VarUniverse& universe);

// Checks symbols and arities against the scheme.
void validate(const Formula& f, const DatabaseScheme& scheme);

// All variables occurring in f, free or bound.
VarSet all_vars(const Formula& f);

// Pretty printer with minimal parentheses in the concrete grammar.
std::string to_string(const Formula& f, const VarUniverse& universe);
std::string to_string(const VarSet& xs, const VarUniverse& universe);

}  // namespace relcomp

#endif  // RELCOMP_FORMULA_HPP
