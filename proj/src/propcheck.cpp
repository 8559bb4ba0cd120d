#include "relcomp/propcheck.hpp"

#include <algorithm>
#include <sstream>

#include "relcomp/analysis.hpp"
#include "relcomp/compile.hpp"
#include "relcomp/error.hpp"
#include "relcomp/normalize.hpp"

namespace relcomp {

void GenConfig::validate() const {
  if (max_depth < 1 || max_vars < 1 || max_domain < 1 || max_tuples < 1 || case_count < 1)
    throw PreconditionError("generator bounds must be at least 1");
}

Bench make_bench(std::size_t max_vars) {
  static const char* const kNames[] = {"x", "y", "z", "w", "u", "v"};
  Bench b;
  std::size_t n = std::max<std::size_t>(max_vars, 3);
  for (std::size_t i = 0; i < n; ++i)
    b.universe.intern(i < 6 ? std::string(kNames[i]) : "v" + std::to_string(i));
  std::vector<Var> all = b.universe.vars();
  Var x = all[0], y = all[1], z = all[2];
  b.scheme.declare("p", {});
  b.scheme.declare("r", {x});
  b.scheme.declare("s", {x, y});
  b.scheme.declare("t", {z, x, y});
  b.vars.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(max_vars));
  return b;
}

// ---------------------------------------------------------------------------
// Generators

CaseGen::CaseGen(const GenConfig& cfg, const DatabaseScheme& scheme, std::vector<Var> vars)
    : cfg_(cfg), scheme_(scheme), vars_(std::move(vars)), symbols_(scheme.symbols()),
      rng_(cfg.seed) {
  cfg_.validate();
  if (vars_.empty()) throw PreconditionError("generator needs at least one variable");
  if (symbols_.empty()) throw PreconditionError("generator needs a relation symbol");
}

std::size_t CaseGen::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool CaseGen::chance(unsigned percent) { return below(100) < percent; }

Var CaseGen::var() { return vars_[below(vars_.size())]; }

Formula CaseGen::random_atom() {
  const std::string& sym = symbols_[below(symbols_.size())];
  std::vector<Var> args(scheme_.canonical(sym).size());
  for (auto& a : args) a = var();
  return Formula::atom(sym, args);
}

Formula CaseGen::atom_over(const std::vector<Var>& pool) {
  std::vector<std::string> usable;
  for (const auto& s : symbols_)
    if (!scheme_.canonical(s).empty()) usable.push_back(s);
  const std::string& sym = usable[below(usable.size())];
  std::vector<Var> args(scheme_.canonical(sym).size());
  for (auto& a : args) a = pool[below(pool.size())];
  return Formula::atom(sym, args);
}

// f conjoined with atoms over `pool` until every variable of `needed` is
// free. The atoms take as many missing variables as their arity allows and
// are joined as a balanced tree to keep the depth low.
Formula CaseGen::cover(Formula f, const VarSet& needed, const VarSet& pool) {
  std::vector<Var> missing;
  for (Var v : needed)
    if (!f.free_vars().count(v)) missing.push_back(v);
  if (missing.empty()) return f;
  std::shuffle(missing.begin(), missing.end(), rng_);
  std::vector<Var> pv(pool.begin(), pool.end());
  std::vector<Formula> atoms;
  std::size_t next = 0;
  while (next < missing.size()) {
    Formula a = atom_over(pv);
    std::vector<Var> args = a.args();
    for (auto& arg : args)
      if (next < missing.size()) arg = missing[next++];
    std::shuffle(args.begin(), args.end(), rng_);
    atoms.push_back(Formula::atom(a.symbol(), args));
  }
  while (atoms.size() > 1) {
    std::vector<Formula> level;
    for (std::size_t i = 0; i + 1 < atoms.size(); i += 2)
      level.push_back(Formula::conj(atoms[i], atoms[i + 1]));
    if (atoms.size() % 2) level.push_back(atoms.back());
    atoms = std::move(level);
  }
  return Formula::conj(f, atoms.front());
}

Formula CaseGen::formula(std::size_t depth) {
  if (depth <= 1) {
    std::size_t k = below(10);
    if (k == 0) return Formula::taut();
    if (k < 7) return random_atom();
    return Formula::eq(var(), var());
  }
  switch (below(7)) {
    case 0:
      return Formula::taut();
    case 1:
      return random_atom();
    case 2:
      return Formula::eq(var(), var());
    case 3:
      return Formula::neg(formula(depth - 1));
    case 4:
      return Formula::conj(formula(depth - 1), formula(depth - 1));
    case 5:
      return Formula::disj(formula(depth - 1), formula(depth - 1));
    default:
      return Formula::exists(var(), formula(depth - 1));
  }
}

// Allowed by construction. Child budgets account for the connectives and
// covering atoms each template adds, so the result rarely exceeds `depth`.
Formula CaseGen::templ(std::size_t depth) {
  if (depth <= 1) return chance(8) ? Formula::taut() : random_atom();
  auto pick = [&](const VarSet& xs) {
    auto it = xs.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(below(xs.size())));
    return *it;
  };
  auto sub = [&](std::size_t k) { return depth > k ? depth - k : std::size_t{1}; };
  // Weights: atom 3, conj 20, equality 12, exists 15, negation 18, disj 12,
  // division 10, double negation 4, de Morgan 6.
  static const unsigned kWeights[] = {3, 20, 12, 15, 18, 12, 10, 4, 6};
  std::size_t roll = below(100), kind = 0;
  while (roll >= kWeights[kind]) roll -= kWeights[kind++];
  switch (kind) {
    case 0:
      return random_atom();
    case 1:
      return Formula::conj(templ(sub(1)), templ(sub(1)));
    case 2: {
      Formula a = templ(sub(1));
      if (a.free_vars().empty()) return a;
      Var x = pick(a.free_vars()), y = var();
      return Formula::conj(a, chance(50) ? Formula::eq(x, y) : Formula::eq(y, x));
    }
    case 3: {
      Formula a = templ(sub(1));
      if (a.free_vars().empty()) return a;
      return Formula::exists(pick(a.free_vars()), a);
    }
    case 4: {
      Formula a = templ(sub(2)), b = templ(sub(2));
      VarSet pool = set_union(a.free_vars(), b.free_vars());
      if (pool.empty()) pool.insert(var());
      return Formula::conj(cover(a, b.free_vars(), pool), Formula::neg(b));
    }
    case 5: {
      Formula a = templ(sub(2)), b = templ(sub(2));
      VarSet pool = set_union(a.free_vars(), b.free_vars());
      if (pool.empty()) return Formula::disj(a, b);
      return Formula::disj(cover(a, pool, pool), cover(b, pool, pool));
    }
    case 6: {
      // a & !(exists y)(b & !c)
      Formula b = templ(sub(4)), c = templ(sub(4));
      VarSet pool = set_union(b.free_vars(), c.free_vars());
      if (pool.empty()) pool.insert(var());
      Formula body = Formula::conj(cover(b, c.free_vars(), pool), Formula::neg(c));
      if (body.free_vars().empty()) return body;
      // Too shallow for the anchor conjunct: close the quantifier instead.
      if (depth < 6) return Formula::neg(exists_all(body.free_vars(), body));
      Formula q = Formula::exists(pick(body.free_vars()), body);
      Formula a = templ(sub(2));
      VarSet apool = set_union(a.free_vars(), q.free_vars());
      if (apool.empty()) return Formula::conj(a, Formula::neg(q));
      return Formula::conj(cover(a, q.free_vars(), apool), Formula::neg(q));
    }
    case 7:
      return Formula::neg(Formula::neg(templ(sub(2))));
    default:
      return Formula::neg(
          Formula::disj(Formula::neg(templ(sub(3))), Formula::neg(templ(sub(3)))));
  }
}

Formula CaseGen::allowed() {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    // Mostly deep templates, some shallow ones, some filtered random formulas.
    std::size_t target = cfg_.max_depth;
    if (cfg_.max_depth > 1 && chance(30)) target = 1 + below(cfg_.max_depth);
    Formula f = chance(15) ? formula(target) : templ(target);
    if (f.depth() > cfg_.max_depth) continue;
    // Single atoms would otherwise crowd the stream.
    if (f.depth() == 1 && cfg_.max_depth > 1 && !chance(25)) continue;
    if (is_allowed(f).allowed) return f;
  }
  return random_atom();
}

Structure CaseGen::structure() {
  const std::size_t slot = structures_++ % 50;
  const std::size_t n = slot == 1 ? 1 : 1 + below(cfg_.max_domain);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i))
                           : "a" + std::to_string(i));
  Structure m(names);
  for (const auto& sym : symbols_) {
    m.declare(sym);
    if (slot == 0) continue;
    const std::size_t arity = scheme_.canonical(sym).size();
    if (arity == 0) {
      if (chance(50)) m.add_tuple(sym, {});
      continue;
    }
    const std::size_t k = below(cfg_.max_tuples + 1);
    for (std::size_t i = 0; i < k; ++i) {
      Tuple t(arity);
      for (auto& a : t) a = static_cast<Atom>(below(n));
      m.add_tuple(sym, t);
    }
  }
  return m;
}

Relation CaseGen::relation(const VarSet& scheme, std::size_t domain_size) {
  Relation out(scheme);
  if (scheme.empty()) {
    if (chance(50)) out.insert({});
    return out;
  }
  const std::size_t k = below(cfg_.max_tuples + 1);
  for (std::size_t i = 0; i < k; ++i) {
    Tuple t(scheme.size());
    for (auto& a : t) a = static_cast<Atom>(below(domain_size));
    out.insert(t);
  }
  return out;
}

std::vector<Formula> gen_formula(const GenConfig& cfg, const DatabaseScheme& scheme,
                                 const std::vector<Var>& vars) {
  CaseGen g(cfg, scheme, vars);
  std::vector<Formula> out;
  for (std::size_t i = 0; i < cfg.case_count; ++i) out.push_back(g.formula());
  return out;
}

std::vector<Formula> gen_allowed(const GenConfig& cfg, const DatabaseScheme& scheme,
                                 const std::vector<Var>& vars) {
  CaseGen g(cfg, scheme, vars);
  std::vector<Formula> out;
  for (std::size_t i = 0; i < cfg.case_count; ++i) out.push_back(g.allowed());
  return out;
}

std::vector<Structure> gen_structure(const GenConfig& cfg, const DatabaseScheme& scheme) {
  std::vector<Var> vars = {Var{0}};
  CaseGen g(cfg, scheme, vars);
  std::vector<Structure> out;
  for (std::size_t i = 0; i < cfg.case_count; ++i) out.push_back(g.structure());
  return out;
}

std::string describe(const Structure& m) {
  std::ostringstream os;
  os << "domain:";
  for (const auto& a : m.domain()) os << ' ' << a;
  for (const auto& [sym, tuples] : m.relations()) {
    if (tuples.empty()) continue;
    os << "; " << sym << ':';
    bool first = true;
    for (const auto& t : tuples) {
      os << (first ? " " : ", ");
      first = false;
      if (t.empty()) os << "()";
      for (std::size_t i = 0; i < t.size(); ++i)
        os << (i ? " " : "") << m.atom_name(t[i]);
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Local evaluation

namespace {

Formula rename_all(const Formula& f, const std::map<Var, Var>& to) {
  auto m = [&](Var v) { return to.at(v); };
  switch (f.kind()) {
    case FormulaKind::Taut:
      return f;
    case FormulaKind::Atom: {
      std::vector<Var> args;
      for (Var v : f.args()) args.push_back(m(v));
      return Formula::atom(f.symbol(), args);
    }
    case FormulaKind::Eq:
      return Formula::eq(m(f.lhs()), m(f.rhs()));
    case FormulaKind::Not:
      return Formula::neg(rename_all(f.child(), to));
    case FormulaKind::And:
      return Formula::conj(rename_all(f.left(), to), rename_all(f.right(), to));
    case FormulaKind::Or:
      return Formula::disj(rename_all(f.left(), to), rename_all(f.right(), to));
    case FormulaKind::Exists:
      return Formula::exists(m(f.bound()), rename_all(f.child(), to));
  }
  return f;
}

std::map<Var, Var> dense_map(const std::vector<Formula>& fs) {
  VarSet all;
  for (const auto& f : fs) {
    VarSet v = all_vars(f);
    all.insert(v.begin(), v.end());
  }
  std::map<Var, Var> out;
  std::uint32_t next = 0;
  for (Var v : all) out[v] = Var{next++};
  return out;
}

}  // namespace

LocalSpace::LocalSpace(const Structure& m, const std::vector<Formula>& formulas,
                       std::size_t cap)
    : m_(m), local_(dense_map(formulas)), space_(m.domain_size(), local_.size(), cap) {}

Var LocalSpace::map(Var x) const {
  auto it = local_.find(x);
  if (it == local_.end()) throw PreconditionError("variable outside the local space");
  return it->second;
}

Formula LocalSpace::localize(const Formula& f) const { return rename_all(f, local_); }

ValuationSet LocalSpace::eval(const Formula& f) const {
  return eval_formula(localize(f), m_, space_);
}

ValuationSet LocalSpace::diagonal(Var x, Var y) const {
  return relcomp::diagonal(space_, map(x), map(y));
}

Atom LocalSpace::value(std::size_t index, Var x) const {
  return static_cast<Atom>(space_.digit(index, map(x)));
}

// ---------------------------------------------------------------------------
// Shrinking

namespace {

std::optional<std::string> unary_symbol(const DatabaseScheme& scheme) {
  for (const auto& s : scheme.symbols())
    if (scheme.canonical(s).size() == 1) return s;
  return std::nullopt;
}

// Every formula obtained from f by replacing one subtree.
void candidates(const Formula& f, const std::optional<std::string>& unary,
                std::vector<Formula>& out) {
  if (!f.is(FormulaKind::Taut)) out.push_back(Formula::taut());
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Exists:
      out.push_back(f.child());
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      out.push_back(f.left());
      out.push_back(f.right());
      break;
    default:
      break;
  }
  if (unary && f.size() > 1)
    for (Var v : f.free_vars()) out.push_back(Formula::atom(*unary, {v}));

  std::vector<Formula> sub;
  switch (f.kind()) {
    case FormulaKind::Not:
      candidates(f.child(), unary, sub);
      for (auto& c : sub) out.push_back(Formula::neg(c));
      break;
    case FormulaKind::Exists:
      candidates(f.child(), unary, sub);
      for (auto& c : sub) out.push_back(Formula::exists(f.bound(), c));
      break;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.is(FormulaKind::And);
      auto build = [&](const Formula& l, const Formula& r) {
        return is_and ? Formula::conj(l, r) : Formula::disj(l, r);
      };
      candidates(f.left(), unary, sub);
      for (auto& c : sub) out.push_back(build(c, f.right()));
      sub.clear();
      candidates(f.right(), unary, sub);
      for (auto& c : sub) out.push_back(build(f.left(), c));
      break;
    }
    default:
      break;
  }
}

Structure without_tuple(const Structure& m, const std::string& sym, const Tuple& drop) {
  Structure out = m;
  out.clear_relation(sym);
  for (const auto& t : m.relation(sym))
    if (t != drop) out.add_tuple(sym, t);
  return out;
}

}  // namespace

Shrunk shrink(const Formula& f, const Structure& m, const FailPredicate& fails,
              bool keep_allowed, const DatabaseScheme& scheme) {
  Shrunk s{f, m, 0};
  const auto unary = unary_symbol(scheme);
  constexpr std::size_t kMaxSteps = 400;
  bool progress = true;
  while (progress && s.steps < kMaxSteps) {
    progress = false;
    std::vector<Formula> cands;
    candidates(s.formula, unary, cands);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Formula& a, const Formula& b) { return a.size() < b.size(); });
    for (const auto& c : cands) {
      if (c.size() >= s.formula.size()) continue;
      if (keep_allowed && !is_allowed(c).allowed) continue;
      if (!fails(c, s.structure)) continue;
      s.formula = c;
      ++s.steps;
      progress = true;
      break;
    }
  }
  progress = true;
  while (progress && s.steps < kMaxSteps) {
    progress = false;
    for (const auto& [sym, tuples] : s.structure.relations()) {
      for (const auto& t : tuples) {
        Structure smaller = without_tuple(s.structure, sym, t);
        if (!fails(s.formula, smaller)) continue;
        s.structure = std::move(smaller);
        ++s.steps;
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Suites

bool SuiteReport::ok() const {
  return std::all_of(props.begin(), props.end(),
                     [](const auto& p) { return p.second.failed == 0; });
}

std::size_t SuiteReport::checks(const std::string& prop) const {
  auto it = props.find(prop);
  return it == props.end() ? 0 : it->second.checks;
}

std::size_t SuiteReport::failures(const std::string& prop) const {
  auto it = props.find(prop);
  return it == props.end() ? 0 : it->second.failed;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames = {"imli", "axioms", "eqcoeq",
                                                  "gen",  "norm",   "e2e"};
  return kNames;
}

namespace {

constexpr std::size_t kStructuresPerCase = 5;
constexpr std::size_t kKeptExamples = 3;

using Check = std::optional<std::string>;
using Property = std::function<Check(const Formula&, const Structure&)>;

std::string var_name(const VarUniverse& u, Var v) { return u.name(v); }

class Runner {
 public:
  Runner(SuiteReport& rep, Bench& bench) : rep_(rep), bench_(bench) {}

  // Runs the property; a thrown exception counts as a failure. Failing
  // cases are shrunk before they are recorded.
  void check(const std::string& prop, const Property& p, const Formula& f,
             const Structure& m, bool keep_allowed) {
    auto run = [&](const Formula& g, const Structure& n) -> Check {
      try {
        return p(g, n);
      } catch (const std::exception& e) {
        return std::string("exception: ") + e.what();
      }
    };
    Tally& t = rep_.props[prop];
    ++t.checks;
    if (!run(f, m)) return;
    ++t.failed;
    if (t.examples.size() >= kKeptExamples) return;
    Shrunk s = shrink(
        f, m, [&](const Formula& g, const Structure& n) { return run(g, n).has_value(); },
        keep_allowed, bench_.scheme);
    Check why = run(s.formula, s.structure);
    t.examples.push_back(*why + " | formula: " + to_string(s.formula, bench_.universe) +
                         " | " + describe(s.structure) + " | shrunk from size " +
                         std::to_string(f.size()) + " in " + std::to_string(s.steps) +
                         " steps");
  }

  // A check without a formula/structure to shrink.
  void record(const std::string& prop, std::size_t checks,
              const std::vector<std::string>& failures) {
    Tally& t = rep_.props[prop];
    t.checks += checks;
    t.failed += failures.size();
    for (const auto& f : failures)
      if (t.examples.size() < kKeptExamples) t.examples.push_back(f);
  }

 private:
  SuiteReport& rep_;
  Bench& bench_;
};

std::uint64_t suite_seed(const GenConfig& cfg, const std::string& name) {
  std::uint64_t h = cfg.seed;
  for (char c : name) h = h * 1099511628211ULL + static_cast<unsigned char>(c);
  return h;
}

std::string partition_text(const Partition& p, const VarUniverse& u) {
  std::string out = "{";
  bool first = true;
  for (const auto& cls : p.classes()) {
    out += first ? "" : " ";
    first = false;
    out += "{";
    for (std::size_t i = 0; i < cls.size(); ++i) out += (i ? "," : "") + var_name(u, cls[i]);
    out += "}";
  }
  return out + "}";
}

// ------------------------------- imli / axioms

void suite_imli(const GenConfig& cfg, Runner& run) {
  std::size_t per_domain = (cfg.case_count + cfg.max_domain - 1) / cfg.max_domain;
  for (std::size_t m = 1; m <= cfg.max_domain; ++m) {
    EmbeddingReport r = check_embedding_identities(m, std::min<std::size_t>(cfg.max_vars, 4),
                                                   per_domain, cfg.seed + m);
    run.record("embedding", r.checks, r.failures);
    run.record("clause_cases", r.cases_per_clause, {});
  }
}

void suite_axioms(const GenConfig& cfg, Runner& run) {
  for (std::size_t m = 1; m <= cfg.max_domain; ++m) {
    std::size_t count = 1;
    for (std::size_t n = 1; n <= cfg.max_vars; ++n) {
      count *= m;
      if (count > 512) break;
      ValuationSpace space(m, n);
      AxiomReport r = check_cylindric_axioms(space, cfg.case_count, cfg.seed + 31 * m + n);
      run.record("axioms", r.checks, r.failures);
      run.record(r.exhaustive ? "subsets_exhaustive" : "subsets_sampled", r.subsets, {});
    }
  }
}

// ------------------------------- eqcoeq

Check eq_diagonals(const Formula& f, const Structure& m, const VarUniverse& u) {
  LocalSpace ls(m, {f});
  ValuationSet v = ls.eval(f);
  ValuationSet c = v.complement();
  for (auto [x, y] : eq_vars(f).pairs())
    if (!v.subset_of(ls.diagonal(x, y)))
      return "||f|| not inside D_" + var_name(u, x) + var_name(u, y) + " for eq pair";
  for (auto [x, y] : coeq_vars(f).pairs())
    if (!c.subset_of(ls.diagonal(x, y)))
      return "complement of ||f|| not inside D_" + var_name(u, x) + var_name(u, y) +
             " for coeq pair";
  return std::nullopt;
}

Check positivity(const Formula& f, const VarUniverse& u) {
  if (is_positive(f) && !coeq_vars(f).is_identity())
    return "positive formula with coeq " + partition_text(coeq_vars(f), u);
  if (is_negative(f) && !eq_vars(f).is_identity())
    return "negative formula with eq " + partition_text(eq_vars(f), u);
  return std::nullopt;
}

Check complement_swap(const Formula& f) {
  Formula c = complement(f);
  if (!(eq_vars(c) == coeq_vars(f))) return "eq(complement f) differs from coeq(f)";
  if (!(coeq_vars(c) == eq_vars(f))) return "coeq(complement f) differs from eq(f)";
  return std::nullopt;
}

// pi_X(V) inside A(M)^X.
bool within_active(const LocalSpace& ls, const ValuationSet& v, const VarSet& xs,
                   const std::set<Atom>& adom) {
  for (std::size_t i : v.indices())
    for (Var x : xs)
      if (!adom.count(ls.value(i, x))) return false;
  return true;
}

Check active_domain_bound(const Formula& f, const Structure& m, const DatabaseScheme& scheme) {
  LocalSpace ls(m, {f});
  ValuationSet v = ls.eval(f);
  std::set<Atom> adom = active_domain(m, scheme);
  if (!within_active(ls, v, gen0(f), adom)) return std::string("gen0 projection leaves A(M)");
  if (!within_active(ls, v.complement(), cogen0(f), adom))
    return std::string("cogen0 projection of the complement leaves A(M)");
  return std::nullopt;
}

void suite_eqcoeq(const GenConfig& cfg, Bench& b, Runner& run, CaseGen& g, SuiteReport& rep) {
  const auto& u = b.universe;
  for (std::size_t i = 0; i < cfg.case_count; ++i) {
    Formula f = g.formula();
    ++rep.cases;
    std::vector<Structure> ms;
    for (std::size_t k = 0; k < kStructuresPerCase; ++k) ms.push_back(g.structure());
    run.check("positivity", [&](const Formula& h, const Structure&) { return positivity(h, u); },
              f, ms[0], false);
    run.check("complement_swap",
              [&](const Formula& h, const Structure&) { return complement_swap(h); }, f, ms[0],
              false);
    for (const auto& m : ms) {
      run.check("eq_diagonals",
                [&](const Formula& h, const Structure& n) { return eq_diagonals(h, n, u); }, f, m,
                false);
      run.check("active_domain",
                [&](const Formula& h, const Structure& n) {
                  return active_domain_bound(h, n, b.scheme);
                },
                f, m, false);
    }
  }
}

// ------------------------------- gen

Check gen_sound(const Formula& f, const Structure& m) {
  Formula gf = gen(f), cf = cogen(f);
  LocalSpace ls(m, {f, gf, cf});
  ValuationSet v = ls.eval(f);
  if (!v.subset_of(ls.eval(gf))) return std::string("||f|| not inside ||gen f||");
  if (!v.complement().subset_of(ls.eval(cf)))
    return std::string("complement of ||f|| not inside ||cogen f||");
  return std::nullopt;
}

Check gen_trivial(const Formula& f, const Structure& m) {
  if (is_positive(f)) {
    Formula cf = cogen(f);
    LocalSpace ls(m, {cf});
    if (!(ls.eval(cf) == ls.full())) return std::string("positive formula, cogen not valid");
  } else {
    Formula gf = gen(f);
    LocalSpace ls(m, {gf});
    if (!(ls.eval(gf) == ls.full())) return std::string("negative formula, gen not valid");
  }
  return std::nullopt;
}

Check gen_free_vars(const Formula& f, const VarUniverse& u) {
  Formula gf = gen(f), cf = cogen(f);
  if (gf.free_vars() != gen0(f))
    return "FV(gen f) = " + to_string(gf.free_vars(), u) + " but gen0 = " +
           to_string(gen0(f), u);
  if (cf.free_vars() != cogen0(f))
    return "FV(cogen f) = " + to_string(cf.free_vars(), u) + " but cogen0 = " +
           to_string(cogen0(f), u);
  return std::nullopt;
}

Check tautology_rules(const Formula& f, const Structure& m) {
  Formula s = simplify_tautology(f);
  LocalSpace ls(m, {f, s});
  if (!(ls.eval(s) == ls.eval(f))) return std::string("simplify_tautology changed ||f||");
  return std::nullopt;
}

void suite_gen(const GenConfig& cfg, Bench& b, Runner& run, CaseGen& g, SuiteReport& rep) {
  for (std::size_t i = 0; i < cfg.case_count; ++i) {
    Formula f = g.formula();
    ++rep.cases;
    std::vector<Structure> ms;
    for (std::size_t k = 0; k < kStructuresPerCase; ++k) ms.push_back(g.structure());
    run.check("gen_free_vars",
              [&](const Formula& h, const Structure&) { return gen_free_vars(h, b.universe); },
              f, ms[0], false);
    for (const auto& m : ms) {
      run.check("gen_bounds", gen_sound, f, m, false);
      run.check("trivial_generators", gen_trivial, f, m, false);
      run.check("tautology_rules", tautology_rules, f, m, false);
    }
  }
}

// ------------------------------- norm

struct NormRun {
  Formula psi;
  std::vector<NormCall> calls;
  Formula result;
};

NormRun run_norm(const Formula& f, Bench& b) {
  NormRun out{generator_for(f, b.scheme, b.universe), {}, Formula::taut()};
  Normalizer n(b.scheme, b.universe);
  n.trace = [&](const NormCall& c) { out.calls.push_back(c); };
  out.result = n.norm(f, out.psi);
  return out;
}

// Structural facts about a normalization run. `which` is "norm_keeps_eq" (eq and
// coeq refinement on every recursive call) or "norm_shape" (polarity, free
// variables, normalized generator and output).
Check norm_structure(const Formula& f, Bench& b, const std::string& which) {
  const auto& u = b.universe;
  NormRun r = run_norm(f, b);
  for (const auto& c : r.calls) {
    const std::string at = " at " + to_string(c.phi, u);
    if (which == "norm_keeps_eq") {
      if (!eq_vars(c.phi).refines(eq_vars(c.result))) return "eq not preserved by norm" + at;
      if (!coeq_vars(c.phi).refines(coeq_vars(c.result)))
        return "coeq not preserved by norm" + at;
    } else {
      if (c.result.is(FormulaKind::Not) != is_negative(c.phi))
        return "negation shape of norm differs from polarity" + at;
      if (c.result.free_vars() != c.phi.free_vars()) return "norm changed free variables" + at;
    }
  }
  if (which == "norm_keeps_eq") return std::nullopt;
  if (!is_normalized(r.psi, b.scheme))
    return "generator not normalized: " + to_string(r.psi, u);
  Formula final_form = normalize_allowed(f, b.scheme, b.universe);
  if (!is_normalized(final_form, b.scheme))
    return "output not normalized: " + to_string(final_form, u);
  if (final_form.free_vars() != f.free_vars()) return std::string("output FV differs");
  return std::nullopt;
}

// Containment and agreement facts on every recursive call, then the end
// result.
Check norm_semantics(const Formula& f, const Structure& m, Bench& b, const std::string& which) {
  const auto& u = b.universe;
  NormRun r = run_norm(f, b);
  for (const auto& c : r.calls) {
    const std::string at = " at " + to_string(c.phi, u);
    if (which == "norm_within_conj_eq" && c.phi.is(FormulaKind::And)) {
      Formula ce = conj_eq(c.phi.left(), c.phi.right());
      LocalSpace ls(m, {c.result, ce});
      if (!ls.eval(c.result).subset_of(ls.eval(ce))) return "norm escapes ~&" + at;
    } else if (which == "norm_within_gen") {
      Formula gf = gen(c.phi), cf = cogen(c.phi);
      LocalSpace ls(m, {c.result, gf, cf});
      ValuationSet v = ls.eval(c.result);
      if (!v.subset_of(ls.eval(gf))) return "norm escapes gen" + at;
      if (!v.complement().subset_of(ls.eval(cf))) return "complement of norm escapes cogen" + at;
    } else if (which == "norm_agrees_on_psi" && is_allowed(c.phi).allowed) {
      LocalSpace ls(m, {c.phi, c.psi, c.result});
      ValuationSet p = ls.eval(c.psi);
      if (!((ls.eval(c.result) & p) == (ls.eval(c.phi) & p))) return "norm & psi differs" + at;
    }
  }
  if (which == "norm_equivalent") {
    Formula n = normalize_allowed(f, b.scheme, b.universe);
    LocalSpace ls(m, {f, n});
    if (!(ls.eval(n) == ls.eval(f))) return "normalization changed ||f||: " + to_string(n, u);
  }
  return std::nullopt;
}

Check atom_renaming(const Formula& a, const Structure& m, Bench& b) {
  if (!a.is(FormulaKind::Atom)) return std::nullopt;
  Formula canon = Formula::atom(a.symbol(), b.scheme.canonical(a.symbol()));
  Formula renamed = atom_rename(canon, a.args(), b.universe);
  LocalSpace ls(m, {a, renamed});
  if (!(ls.eval(renamed) == ls.eval(a)))
    return "renamed atom differs: " + to_string(renamed, b.universe);
  if (renamed.free_vars() != a.free_vars()) return std::string("renamed atom changes FV");
  return std::nullopt;
}

// align(phi, psi) where FV(phi) is inside FV(psi).
Check align_agrees(const Formula& phi, const Formula& psi, const Structure& m) {
  Formula al = align(phi, psi);
  LocalSpace ls(m, {phi, psi, al});
  ValuationSet a = ls.eval(al), p = ls.eval(psi), f = ls.eval(phi);
  if (!((a & p) == (f & p))) return std::string("align & psi differs from phi & psi");
  if (!a.subset_of(f)) return std::string("align escapes phi");
  if (!eq_vars(phi).refines(eq_vars(al))) return std::string("align loses eq pairs");
  if (al.free_vars() != psi.free_vars()) return std::string("align FV differs from FV(psi)");
  return std::nullopt;
}

void suite_norm(const GenConfig& cfg, Bench& b, Runner& run, CaseGen& g, SuiteReport& rep) {
  for (std::size_t i = 0; i < cfg.case_count; ++i) {
    Formula f = g.allowed();
    ++rep.cases;
    std::vector<Structure> ms;
    for (std::size_t k = 0; k < kStructuresPerCase; ++k) ms.push_back(g.structure());
    for (const char* which : {"norm_keeps_eq", "norm_shape"})
      run.check(
          which,
          [&](const Formula& h, const Structure&) { return norm_structure(h, b, which); }, f,
          ms[0], true);
    for (const auto& m : ms)
      for (const char* which : {"norm_within_conj_eq", "norm_within_gen", "norm_agrees_on_psi",
                                "norm_equivalent"})
        run.check(
            which,
            [&](const Formula& h, const Structure& n) { return norm_semantics(h, n, b, which); },
            f, m, true);

    // Atom renaming with repeated targets.
    Formula a = g.formula(1);
    if (!a.is(FormulaKind::Atom)) a = Formula::atom("s", {g.var(), g.var()});
    for (const auto& m : ms)
      run.check(
          "atom_renaming",
          [&](const Formula& h, const Structure& n) { return atom_renaming(h, n, b); }, a, m,
          false);

    // align(phi, psi) with FV(phi) inside FV(psi).
    Formula phi = g.formula(3);
    Formula rest = g.formula(3);
    Formula psi = rest;
    for (Var v : phi.free_vars()) psi = Formula::conj(psi, Formula::atom("r", {v}));
    for (const auto& m : ms)
      run.check(
          "align_agrees",
          [&](const Formula& h, const Structure& n) -> Check {
            Formula ps = rest;
            for (Var v : h.free_vars()) ps = Formula::conj(ps, Formula::atom("r", {v}));
            return align_agrees(h, ps, n);
          },
          phi, m, false);
  }
}

// ------------------------------- e2e

Check e2e_complete(const Formula& f, const Structure& m, Bench& b) {
  CompileResult c = compile_allowed(f, b.scheme, b.universe);
  VerifyResult v = verify(f, c.expr, m, b.scheme);
  if (v.equal) return std::nullopt;
  return "compiled expression differs: " + to_string(c.expr, b.universe);
}

Check e2e_domain_independent(const Formula& f, const Structure& m, Bench& b) {
  CompileResult c = compile_allowed(f, b.scheme, b.universe);
  Structure big = m.with_extra_atoms({"junk0", "junk1"});
  if (!(eval_expr(c.expr, m, b.scheme) == eval_expr(c.expr, big, b.scheme)))
    return std::string("compiled value depends on the domain");
  LocalSpace small_ls(m, {f}), big_ls(big, {f});
  // Local numbering depends only on f, so projections line up.
  std::map<Var, Var> dense = dense_map({f});
  VarSet fv;
  for (Var v : f.free_vars()) fv.insert(dense.at(v));
  if (!(project_valuations(small_ls.eval(f), fv) == project_valuations(big_ls.eval(f), fv)))
    return std::string("formula value projected to FV depends on the domain");
  return std::nullopt;
}

Check e2e_differential(const Formula& f, const Structure& m, Bench& b) {
  CompileResult c = compile_allowed(f, b.scheme, b.universe);
  RelExpr ea = expr_active(f, b.scheme, b.universe);
  if (ea.scheme() != c.expr.scheme()) return std::string("active-domain scheme differs");
  if (!(eval_expr(ea, m, b.scheme) == eval_expr(c.expr, m, b.scheme)))
    return "active-domain translation differs: " + to_string(ea, b.universe);
  return std::nullopt;
}

void suite_e2e(const GenConfig& cfg, Bench& b, Runner& run, CaseGen& g, SuiteReport& rep) {
  for (std::size_t i = 0; i < cfg.case_count; ++i) {
    Formula f = g.allowed();
    ++rep.cases;
    for (std::size_t k = 0; k < kStructuresPerCase; ++k) {
      Structure m = g.structure();
      run.check("completeness",
                [&](const Formula& h, const Structure& n) { return e2e_complete(h, n, b); }, f,
                m, true);
      run.check("domain_independence",
                [&](const Formula& h, const Structure& n) {
                  return e2e_domain_independent(h, n, b);
                },
                f, m, true);
      run.check("differential",
                [&](const Formula& h, const Structure& n) { return e2e_differential(h, n, b); },
                f, m, true);
    }
  }
}

}  // namespace

SuiteReport run_suite(const std::string& name, const GenConfig& cfg_in) {
  cfg_in.validate();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw PreconditionError("unknown suite: " + name);
  GenConfig cfg = cfg_in;
  cfg.seed = suite_seed(cfg_in, name);
  SuiteReport rep;
  rep.name = name;
  Bench b = make_bench(cfg.max_vars);
  Runner run(rep, b);
  CaseGen g(cfg, b.scheme, b.vars);
  if (name == "imli") {
    rep.cases = cfg.case_count;
    suite_imli(cfg, run);
  } else if (name == "axioms") {
    rep.cases = cfg.case_count;
    suite_axioms(cfg, run);
  } else if (name == "eqcoeq") {
    suite_eqcoeq(cfg, b, run, g, rep);
  } else if (name == "gen") {
    suite_gen(cfg, b, run, g, rep);
  } else if (name == "norm") {
    suite_norm(cfg, b, run, g, rep);
  } else {
    suite_e2e(cfg, b, run, g, rep);
  }
  return rep;
}

std::vector<SuiteReport> run_suites(const std::string& name, const GenConfig& cfg) {
  std::vector<SuiteReport> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, cfg));
  } else {
    out.push_back(run_suite(name, cfg));
  }
  return out;
}

std::string render(const SuiteReport& report) {
  std::ostringstream os;
  os << "suite " << report.name << ": " << report.cases << " cases, "
     << (report.ok() ? "ok" : "FAILED") << '\n';
  for (const auto& [prop, t] : report.props) {
    os << "  " << prop << ": " << t.checks << " checks, " << t.failed << " failures\n";
    for (const auto& e : t.examples) os << "    counterexample: " << e << '\n';
  }
  return os.str();
}

}  // namespace relcomp
