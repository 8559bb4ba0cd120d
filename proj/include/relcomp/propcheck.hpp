#ifndef RELCOMP_PROPCHECK_HPP
#define RELCOMP_PROPCHECK_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relcomp/formula.hpp"
#include "relcomp/relalg.hpp"
#include "relcomp/semantics.hpp"

namespace relcomp {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_depth = 5;
  std::size_t max_vars = 4;
  std::size_t max_domain = 3;
  std::size_t max_tuples = 6;
  std::size_t case_count = 100;

  // Throws PreconditionError unless every bound is at least 1.
  void validate() const;
};

// Fixed test vocabulary. Variables x y z w u v ..., of which the first
// max_vars appear in generated formulas; relations p/0, r/1, s/2, t/3 with
// canonical atoms p(), r(x), s(x, y), t(z, x, y).
struct Bench {
  VarUniverse universe;
  DatabaseScheme scheme;
  std::vector<Var> vars;
};
Bench make_bench(std::size_t max_vars);

// Deterministic case source: identical config gives an identical stream.
class CaseGen {
 public:
  CaseGen(const GenConfig& cfg, const DatabaseScheme& scheme, std::vector<Var> vars);

  // Any formula of depth at most `depth` over all seven node kinds.
  Formula formula(std::size_t depth);
  Formula formula() { return formula(cfg_.max_depth); }

  // An allowed formula of depth at most max_depth.
  Formula allowed();

  // Domain of 1..max_domain atoms, each relation holding up to max_tuples
  // tuples. Positions 0 and 1 of every 50-case window are forced edge
  // cases: all relations empty, and a singleton domain.
  Structure structure();

  // A random relation over `scheme` with atoms below `domain_size`.
  Relation relation(const VarSet& scheme, std::size_t domain_size);

  Var var();
  std::mt19937_64& rng() { return rng_; }
  const GenConfig& config() const { return cfg_; }

 private:
  std::size_t below(std::size_t n);
  bool chance(unsigned percent);
  Formula random_atom();
  Formula atom_over(const std::vector<Var>& pool);
  Formula cover(Formula f, const VarSet& needed, const VarSet& pool);
  Formula templ(std::size_t depth);

  GenConfig cfg_;
  const DatabaseScheme& scheme_;
  std::vector<Var> vars_;
  std::vector<std::string> symbols_;
  std::mt19937_64 rng_;
  std::size_t structures_ = 0;
};

std::vector<Formula> gen_formula(const GenConfig& cfg, const DatabaseScheme& scheme,
                                 const std::vector<Var>& vars);
std::vector<Formula> gen_allowed(const GenConfig& cfg, const DatabaseScheme& scheme,
                                 const std::vector<Var>& vars);
std::vector<Structure> gen_structure(const GenConfig& cfg, const DatabaseScheme& scheme);

// `domain: a b; r: a; s: a b, b a`
std::string describe(const Structure& m);

// Exact evaluation over a valuation space holding just the variables of the
// given formulas (free or bound), renumbered densely.
class LocalSpace {
 public:
  LocalSpace(const Structure& m, const std::vector<Formula>& formulas,
             std::size_t cap = kDefaultValuationCap);

  const ValuationSpace& space() const { return space_; }
  ValuationSet eval(const Formula& f) const;
  ValuationSet full() const { return ValuationSet::full(space_); }
  ValuationSet diagonal(Var x, Var y) const;
  // Value of global variable x in the valuation with the given index.
  Atom value(std::size_t index, Var x) const;
  bool holds(Var x) const { return local_.count(x) != 0; }

 private:
  Var map(Var x) const;
  Formula localize(const Formula& f) const;

  const Structure& m_;
  std::map<Var, Var> local_;
  ValuationSpace space_;
};

// Greedy shrinking. `fails` reports whether a candidate still exhibits the
// failure. Subtrees are replaced by 1, by their children, or by a unary atom
// over one of their variables; then tuples are dropped one at a time. Each
// accepted step strictly reduces size or tuple count.
struct Shrunk {
  Formula formula;
  Structure structure;
  std::size_t steps = 0;
};
using FailPredicate = std::function<bool(const Formula&, const Structure&)>;
Shrunk shrink(const Formula& f, const Structure& m, const FailPredicate& fails,
              bool keep_allowed, const DatabaseScheme& scheme);

// Counts per property; at most a few shrunk counterexamples are kept.
struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::vector<std::string> examples;
};

struct SuiteReport {
  std::string name;
  std::size_t cases = 0;
  std::map<std::string, Tally> props;

  bool ok() const;
  std::size_t checks(const std::string& prop) const;
  std::size_t failures(const std::string& prop) const;
};

// imli, axioms, eqcoeq, gen, norm, e2e.
const std::vector<std::string>& suite_names();

// Throws PreconditionError for an unknown name.
SuiteReport run_suite(const std::string& name, const GenConfig& cfg);

// A single suite, or every suite for "all".
std::vector<SuiteReport> run_suites(const std::string& name, const GenConfig& cfg);

std::string render(const SuiteReport& report);

}  // namespace relcomp

#endif  // RELCOMP_PROPCHECK_HPP
