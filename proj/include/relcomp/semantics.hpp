#ifndef RELCOMP_SEMANTICS_HPP
#define RELCOMP_SEMANTICS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relcomp/formula.hpp"

namespace relcomp {

// A domain element, as an index into Structure::domain().
using Atom = std::uint32_t;
using Tuple = std::vector<Atom>;

inline constexpr std::size_t kDefaultValuationCap = 1'000'000;

// A finite structure: non-empty ordered domain plus one relation per symbol.
// Equality is the identity on the domain and is not stored.
class Structure {
 public:
  explicit Structure(std::vector<std::string> domain);

  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }
  std::optional<Atom> atom(std::string_view name) const;
  const std::string& atom_name(Atom a) const { return domain_.at(a); }

  // Makes `symbol` interpreted (as the empty relation if nothing is added).
  void declare(const std::string& symbol);
  void add_tuple(const std::string& symbol, Tuple t);
  void clear_relation(const std::string& symbol);

  bool interprets(std::string_view symbol) const;
  const std::set<Tuple>& relation(std::string_view symbol) const;
  const std::map<std::string, std::set<Tuple>, std::less<>>& relations() const {
    return rels_;
  }

  // Checks that every scheme symbol is interpreted with matching arity.
  void validate(const DatabaseScheme& scheme) const;

  // Same relations over a domain extended by `extra` new atoms.
  Structure with_extra_atoms(const std::vector<std::string>& extra) const;

 private:
  std::vector<std::string> domain_;
  std::map<std::string, std::set<Tuple>, std::less<>> rels_;
};

// A total valuation indexed by variable ord.
using Valuation = std::vector<Atom>;

// The set M^X of all valuations of the first `nvars` variables, enumerated by
// a mixed-radix index: v maps to sum v[i] * m^i.
class ValuationSpace {
 public:
  ValuationSpace(std::size_t domain_size, std::size_t nvars,
                 std::size_t cap = kDefaultValuationCap);

  std::size_t domain_size() const { return m_; }
  std::size_t nvars() const { return n_; }
  std::size_t count() const { return count_; }
  std::size_t stride(Var x) const { return strides_.at(x.ord); }
  std::size_t digit(std::size_t index, Var x) const {
    return (index / strides_[x.ord]) % m_;
  }

  std::size_t index(const Valuation& v) const;
  Valuation decode(std::size_t index) const;

  bool operator==(const ValuationSpace& o) const { return m_ == o.m_ && n_ == o.n_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t count_;
  std::vector<std::size_t> strides_;
};

// A subset of the valuation space, stored as a membership bitmap over the
// valuation index. Membership costs O(|X|) to compute the index.
class ValuationSet {
 public:
  static ValuationSet empty(const ValuationSpace& space);
  static ValuationSet full(const ValuationSpace& space);

  const ValuationSpace& space() const { return space_; }

  bool contains(const Valuation& v) const { return contains_index(space_.index(v)); }
  bool contains_index(std::size_t i) const {
    return (bits_[i >> 6] >> (i & 63)) & 1U;
  }
  void insert(const Valuation& v) { insert_index(space_.index(v)); }
  void insert_index(std::size_t i) { bits_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase_index(std::size_t i) { bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const;
  bool is_empty() const;

  ValuationSet operator|(const ValuationSet& o) const;
  ValuationSet operator&(const ValuationSet& o) const;
  ValuationSet operator-(const ValuationSet& o) const;
  ValuationSet complement() const;
  bool subset_of(const ValuationSet& o) const;
  bool operator==(const ValuationSet& o) const;

  std::vector<std::size_t> indices() const;
  std::vector<Valuation> valuations() const;

 private:
  explicit ValuationSet(const ValuationSpace& space);
  void check_same(const ValuationSet& o) const;
  void trim();

  ValuationSpace space_;
  std::vector<std::uint64_t> bits_;
};

// All |M|^|X| valuations; throws ResourceError above `cap`.
ValuationSet all_valuations(const Structure& m, const VarUniverse& u,
                            std::size_t cap = kDefaultValuationCap);

// C_x(V): valuations agreeing with some member of V everywhere except x.
ValuationSet cylindrify(const ValuationSet& v, Var x);

// C_X(V), applied in ord order.
ValuationSet cylindrify_set(const ValuationSet& v, const VarSet& xs);

// D_xy: valuations with v(x) = v(y).
ValuationSet diagonal(const ValuationSpace& space, Var x, Var y);

// ||f||_M over the given space. All variables of f must lie in the space.
ValuationSet eval_formula(const Formula& f, const Structure& m,
                          const ValuationSpace& space);
ValuationSet eval_formula(const Formula& f, const Structure& m,
                          const VarUniverse& u,
                          std::size_t cap = kDefaultValuationCap);

struct AxiomReport {
  std::size_t checks = 0;
  std::size_t subsets = 0;
  bool exhaustive = false;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks the cylindric-algebra axioms (and the three complement/cylinder
// facts used by the soundness proofs) on the powerset algebra over the
// valuation space. Subsets are enumerated exhaustively when there are at most
// 2^16 of them, otherwise `samples` subsets are drawn from `seed`.
AxiomReport check_cylindric_axioms(const ValuationSpace& space, std::size_t samples,
                                   std::uint64_t seed = 1);

}  // namespace relcomp

#endif  // RELCOMP_SEMANTICS_HPP
