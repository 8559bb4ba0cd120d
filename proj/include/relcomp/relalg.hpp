#ifndef RELCOMP_RELALG_HPP
#define RELCOMP_RELALG_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "relcomp/formula.hpp"
#include "relcomp/semantics.hpp"

namespace relcomp {

// A finite relation over a scheme. Tuples are stored with one entry per
// scheme variable in ord order.
class Relation {
 public:
  explicit Relation(VarSet scheme);

  // The relation {empty tuple} over the empty scheme.
  static Relation dee();

  const VarSet& scheme() const { return scheme_; }
  const std::vector<Var>& columns() const { return cols_; }
  const std::set<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  void insert(Tuple t);
  bool contains(const Tuple& t) const { return tuples_.count(t) != 0; }

  // Column position of x in the tuple layout.
  std::size_t column(Var x) const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.scheme_ == b.scheme_ && a.tuples_ == b.tuples_;
  }

 private:
  VarSet scheme_;
  std::vector<Var> cols_;
  std::set<Tuple> tuples_;
};

Relation join(const Relation& a, const Relation& b);
Relation project(const Relation& t, const VarSet& keep);
Relation select_eq(const Relation& t, Var x, Var y);
// rho_{y<-x}: re-keys column x as y.
Relation rename_attr(const Relation& t, Var x, Var y);
Relation rel_union(const Relation& a, const Relation& b);
Relation difference(const Relation& a, const Relation& b);

enum class ExprKind { Dee, Base, Union, Diff, Join, Project, Select, Rename };

// Relational expression with a scheme fixed at construction. Every factory
// enforces the formation rules, so a RelExpr value is always well formed.
class RelExpr {
 public:
  static RelExpr dee();
  static RelExpr base(const std::string& symbol, const DatabaseScheme& scheme);
  static RelExpr unite(RelExpr l, RelExpr r);
  static RelExpr diff(RelExpr l, RelExpr r);
  static RelExpr join(RelExpr l, RelExpr r);
  static RelExpr project(VarSet keep, RelExpr e);
  static RelExpr select(Var x, Var y, RelExpr e);
  // rho_{y<-x}
  static RelExpr rename(Var y, Var x, RelExpr e);

  ExprKind kind() const;
  const VarSet& scheme() const;

  const std::string& symbol() const;          // Base
  const std::vector<Var>& base_vars() const;  // Base, canonical atom order
  const VarSet& keep() const;                 // Project
  Var x() const;                              // Select, Rename (source)
  Var y() const;                              // Select, Rename (target)
  RelExpr left() const;                       // Union, Diff, Join
  RelExpr right() const;                      // Union, Diff, Join
  RelExpr child() const;                      // Project, Select, Rename

  std::size_t size() const;

  friend bool operator==(const RelExpr& a, const RelExpr& b);

  struct Node;

 private:
  explicit RelExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Scheme computed from scratch by the formation rules; equals scheme().
VarSet recompute_scheme(const RelExpr& e);

Relation eval_expr(const RelExpr& e, const Structure& m, const DatabaseScheme& scheme);

// epsilon(T): all valuations whose restriction to S(T) lies in T.
ValuationSet embed(const Relation& t, const ValuationSpace& space);
ValuationSet embed(const Relation& t, const Structure& m, const VarUniverse& u,
                   std::size_t cap = kDefaultValuationCap);

// pi_X(V) as a relation over X.
Relation project_valuations(const ValuationSet& v, const VarSet& xs);

struct EmbeddingReport {
  std::size_t cases_per_clause = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks the six embedding identities on random relations over random
// subschemes of the first `nvars` variables.
EmbeddingReport check_embedding_identities(std::size_t domain_size, std::size_t nvars,
                                           std::size_t samples, std::uint64_t seed = 1);

// The formula with epsilon(||E||_M) = ||formula||_M.
Formula formula_of_expr(const RelExpr& e, const DatabaseScheme& scheme);

// Text form: DEE, r, (E1 union E2), (E1 minus E2), (E1 join E2),
// project{x,y}(E), select{x=y}(E), rename{y<-x}(E).
std::string to_string(const RelExpr& e, const VarUniverse& u);

}  // namespace relcomp

#endif  // RELCOMP_RELALG_HPP
