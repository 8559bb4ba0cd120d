#ifndef RELCOMP_PARTITION_HPP
#define RELCOMP_PARTITION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "relcomp/formula.hpp"

namespace relcomp {

// An equivalence on the variable universe. Variables beyond the stored range
// are singletons, so the identity is the empty partition and every value is
// valid for a growing universe.
class Partition {
 public:
  Partition() = default;

  // Eq(pairs): the least equivalence containing the pairs.
  static Partition closure(const std::vector<std::pair<Var, Var>>& pairs);

  // Least member of x's class.
  Var rep(Var x) const;
  bool same(Var x, Var y) const { return rep(x) == rep(y); }
  bool is_identity() const;

  // Eq(E1 u E2).
  Partition join(const Partition& o) const;
  // E1 n E2 (already an equivalence).
  Partition meet(const Partition& o) const;
  // Eq(E restricted to (X \ {x})^2): x becomes a singleton.
  Partition isolate(Var x) const;

  // Non-singleton classes, each sorted, ordered by least member.
  std::vector<std::vector<Var>> classes() const;
  // All pairs (x, y) with x < y in a common class.
  std::vector<std::pair<Var, Var>> pairs() const;
  // this is contained in o as a set of pairs.
  bool refines(const Partition& o) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.rep_ == b.rep_;
  }

 private:
  void normalize();
  std::vector<std::uint32_t> rep_;
};

inline Partition equiv_closure(const std::vector<std::pair<Var, Var>>& pairs) {
  return Partition::closure(pairs);
}

// cl_E(X): variables equivalent to some member of X.
VarSet cl(const Partition& e, const VarSet& xs);

}  // namespace relcomp

#endif  // RELCOMP_PARTITION_HPP
