#include "relcomp/semantics.hpp"

#include <bit>
#include <random>

#include "relcomp/error.hpp"

namespace relcomp {

// ---------------------------------------------------------------------------
// Structure

Structure::Structure(std::vector<std::string> domain) : domain_(std::move(domain)) {
  if (domain_.empty()) throw PreconditionError("a structure needs a non-empty domain");
  std::set<std::string> seen;
  for (const auto& a : domain_)
    if (!seen.insert(a).second)
      throw SchemeError("domain atom '" + a + "' listed twice");
}

std::optional<Atom> Structure::atom(std::string_view name) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i] == name) return static_cast<Atom>(i);
  return std::nullopt;
}

void Structure::declare(const std::string& symbol) { rels_[symbol]; }

void Structure::add_tuple(const std::string& symbol, Tuple t) {
  for (Atom a : t)
    if (a >= domain_.size())
      throw PreconditionError("tuple entry outside the domain in relation '" +
                              symbol + "'");
  auto& rel = rels_[symbol];
  if (!rel.empty() && rel.begin()->size() != t.size())
    throw SchemeError("tuples of '" + symbol + "' have inconsistent lengths");
  rel.insert(std::move(t));
}

void Structure::clear_relation(const std::string& symbol) { rels_[symbol].clear(); }

bool Structure::interprets(std::string_view symbol) const {
  return rels_.find(symbol) != rels_.end();
}

const std::set<Tuple>& Structure::relation(std::string_view symbol) const {
  auto it = rels_.find(symbol);
  if (it == rels_.end())
    throw SchemeError("relation '" + std::string(symbol) +
                      "' is not interpreted in the structure");
  return it->second;
}

void Structure::validate(const DatabaseScheme& scheme) const {
  for (const auto& [sym, arity] : scheme.signature().relations()) {
    const auto& rel = relation(sym);
    for (const auto& t : rel)
      if (t.size() != arity)
        throw SchemeError("tuple of '" + sym + "' has " + std::to_string(t.size()) +
                          " entries, expected " + std::to_string(arity));
  }
}

Structure Structure::with_extra_atoms(const std::vector<std::string>& extra) const {
  std::vector<std::string> dom = domain_;
  dom.insert(dom.end(), extra.begin(), extra.end());
  Structure out(std::move(dom));
  out.rels_ = rels_;
  return out;
}

// ---------------------------------------------------------------------------
// ValuationSpace

ValuationSpace::ValuationSpace(std::size_t domain_size, std::size_t nvars,
                               std::size_t cap)
    : m_(domain_size), n_(nvars), count_(1) {
  if (m_ == 0) throw PreconditionError("valuation space over an empty domain");
  for (std::size_t i = 0; i < n_; ++i) {
    strides_.push_back(count_);
    if (count_ > cap / m_)
      throw ResourceError("valuation space " + std::to_string(m_) + "^" +
                          std::to_string(n_) + " exceeds the cap of " +
                          std::to_string(cap));
    count_ *= m_;
  }
  if (count_ > cap)
    throw ResourceError("valuation space exceeds the cap of " + std::to_string(cap));
}

std::size_t ValuationSpace::index(const Valuation& v) const {
  if (v.size() != n_) throw PreconditionError("valuation has the wrong length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] >= m_) throw PreconditionError("valuation value outside the domain");
    idx += v[i] * strides_[i];
  }
  return idx;
}

Valuation ValuationSpace::decode(std::size_t index) const {
  Valuation v(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    v[i] = static_cast<Atom>(index % m_);
    index /= m_;
  }
  return v;
}

// ---------------------------------------------------------------------------
// ValuationSet

ValuationSet::ValuationSet(const ValuationSpace& space)
    : space_(space), bits_((space.count() + 63) / 64, 0) {}

ValuationSet ValuationSet::empty(const ValuationSpace& space) { return ValuationSet(space); }

ValuationSet ValuationSet::full(const ValuationSpace& space) {
  ValuationSet s(space);
  for (auto& w : s.bits_) w = ~std::uint64_t{0};
  s.trim();
  return s;
}

void ValuationSet::trim() {
  std::size_t rem = space_.count() % 64;
  if (rem != 0 && !bits_.empty()) bits_.back() &= (std::uint64_t{1} << rem) - 1;
}

void ValuationSet::check_same(const ValuationSet& o) const {
  if (!(space_ == o.space_))
    throw PreconditionError("valuation sets over different spaces");
}

std::size_t ValuationSet::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ValuationSet::is_empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

ValuationSet ValuationSet::operator|(const ValuationSet& o) const {
  check_same(o);
  ValuationSet r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= o.bits_[i];
  return r;
}

ValuationSet ValuationSet::operator&(const ValuationSet& o) const {
  check_same(o);
  ValuationSet r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= o.bits_[i];
  return r;
}

ValuationSet ValuationSet::operator-(const ValuationSet& o) const {
  check_same(o);
  ValuationSet r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~o.bits_[i];
  return r;
}

ValuationSet ValuationSet::complement() const {
  ValuationSet r = *this;
  for (auto& w : r.bits_) w = ~w;
  r.trim();
  return r;
}

bool ValuationSet::subset_of(const ValuationSet& o) const {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

bool ValuationSet::operator==(const ValuationSet& o) const {
  return space_ == o.space_ && bits_ == o.bits_;
}

std::vector<std::size_t> ValuationSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    auto word = bits_[w];
    while (word) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<Valuation> ValuationSet::valuations() const {
  std::vector<Valuation> out;
  for (auto i : indices()) out.push_back(space_.decode(i));
  return out;
}

// ---------------------------------------------------------------------------
// Cylindric operations

ValuationSet all_valuations(const Structure& m, const VarUniverse& u, std::size_t cap) {
  return ValuationSet::full(ValuationSpace(m.domain_size(), u.size(), cap));
}

ValuationSet cylindrify(const ValuationSet& v, Var x) {
  const auto& space = v.space();
  if (x.ord >= space.nvars())
    throw PreconditionError("cylindrification over a variable outside the space");
  auto out = ValuationSet::empty(space);
  const std::size_t stride = space.stride(x);
  const std::size_t m = space.domain_size();
  for (auto i : v.indices()) {
    std::size_t base = i - space.digit(i, x) * stride;
    for (std::size_t k = 0; k < m; ++k) out.insert_index(base + k * stride);
  }
  return out;
}

ValuationSet cylindrify_set(const ValuationSet& v, const VarSet& xs) {
  ValuationSet out = v;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out = cylindrify(out, *it);
  return out;
}

ValuationSet diagonal(const ValuationSpace& space, Var x, Var y) {
  if (x.ord >= space.nvars() || y.ord >= space.nvars())
    throw PreconditionError("diagonal over a variable outside the space");
  auto out = ValuationSet::empty(space);
  for (std::size_t i = 0; i < space.count(); ++i)
    if (space.digit(i, x) == space.digit(i, y)) out.insert_index(i);
  return out;
}

namespace {

ValuationSet eval_rec(const Formula& f, const Structure& m, const ValuationSpace& space) {
  switch (f.kind()) {
    case FormulaKind::Taut:
      return ValuationSet::full(space);
    case FormulaKind::Atom: {
      const auto& rel = m.relation(f.symbol());
      const auto& args = f.args();
      auto out = ValuationSet::empty(space);
      Tuple t(args.size());
      for (std::size_t i = 0; i < space.count(); ++i) {
        for (std::size_t k = 0; k < args.size(); ++k)
          t[k] = static_cast<Atom>(space.digit(i, args[k]));
        if (rel.count(t)) out.insert_index(i);
      }
      return out;
    }
    case FormulaKind::Eq:
      return diagonal(space, f.lhs(), f.rhs());
    case FormulaKind::Not:
      return eval_rec(f.child(), m, space).complement();
    case FormulaKind::And:
      return eval_rec(f.left(), m, space) & eval_rec(f.right(), m, space);
    case FormulaKind::Or:
      return eval_rec(f.left(), m, space) | eval_rec(f.right(), m, space);
    case FormulaKind::Exists:
      return cylindrify(eval_rec(f.child(), m, space), f.bound());
  }
  return ValuationSet::empty(space);
}

}  // namespace

ValuationSet eval_formula(const Formula& f, const Structure& m, const ValuationSpace& space) {
  if (space.domain_size() != m.domain_size())
    throw PreconditionError("valuation space and structure disagree on the domain");
  for (Var v : all_vars(f))
    if (v.ord >= space.nvars())
      throw PreconditionError("formula mentions a variable outside the valuation space");
  return eval_rec(f, m, space);
}

ValuationSet eval_formula(const Formula& f, const Structure& m, const VarUniverse& u,
                          std::size_t cap) {
  return eval_formula(f, m, ValuationSpace(m.domain_size(), u.size(), cap));
}

// ---------------------------------------------------------------------------
// Axiom checks

namespace {

struct AxiomChecker {
  const ValuationSpace& space;
  AxiomReport& report;
  std::vector<Var> vars;
  ValuationSet top;
  ValuationSet bottom;
  std::vector<std::vector<ValuationSet>> diag;

  explicit AxiomChecker(const ValuationSpace& s, AxiomReport& r)
      : space(s),
        report(r),
        top(ValuationSet::full(s)),
        bottom(ValuationSet::empty(s)) {
    for (std::uint32_t i = 0; i < s.nvars(); ++i) vars.push_back(Var{i});
    diag.resize(vars.size());
    for (Var x : vars)
      for (Var y : vars) diag[x.ord].push_back(diagonal(s, x, y));
  }

  void expect(bool cond, const std::string& what) {
    ++report.checks;
    if (!cond && report.failures.size() < 32) report.failures.push_back(what);
  }

  static std::string name(Var x) { return "x" + std::to_string(x.ord); }

  // Axioms and facts that need no subset.
  void constants() {
    for (Var i : vars) {
      expect(cylindrify(bottom, i).is_empty(), "axiom 2: c_" + name(i) + "(0) != 0");
      expect(diag[i.ord][i.ord] == top, "axiom 6: d_ii != 1 for " + name(i));
      for (Var j : vars)
        for (Var k : vars) {
          if (i == j || i == k) continue;
          auto rhs = cylindrify(diag[j.ord][i.ord] & diag[i.ord][k.ord], i);
          expect(diag[j.ord][k.ord] == rhs,
                 "axiom 7 fails for i=" + name(i) + " j=" + name(j) + " k=" + name(k));
        }
    }
  }

  void single(const ValuationSet& a) {
    ++report.subsets;
    auto na = a.complement();
    expect((a | na) == top && (a & na).is_empty(), "axiom 1: complement laws");
    expect(na.complement() == a, "axiom 1: involution");
    std::vector<ValuationSet> cyl;
    for (Var i : vars) cyl.push_back(cylindrify(a, i));
    for (Var i : vars) {
      const auto& ca = cyl[i.ord];
      expect((a & ca) == a, "axiom 3: a & c_i(a) != a for i=" + name(i));
      auto nca = ca.complement();
      expect(nca.subset_of(na), "complement of c_i(V) not inside complement of V");
      expect(cylindrify(nca, i) == nca, "c_i fails to fix the complement of c_i(V)");
      expect(nca.subset_of(cylindrify(na, i)),
             "complement of c_i(V) not inside c_i of the complement");
      for (Var j : vars) {
        if (j.ord <= i.ord) continue;
        expect(cylindrify(cyl[j.ord], i) == cylindrify(ca, j),
               "axiom 5: c_i c_j != c_j c_i for i=" + name(i) + " j=" + name(j));
        auto l = cylindrify(diag[i.ord][j.ord] & a, i);
        auto r = cylindrify(diag[i.ord][j.ord] & na, i);
        expect((l & r).is_empty(), "axiom 8 fails for i=" + name(i) + " j=" + name(j));
        auto l2 = cylindrify(diag[j.ord][i.ord] & a, j);
        auto r2 = cylindrify(diag[j.ord][i.ord] & na, j);
        expect((l2 & r2).is_empty(), "axiom 8 fails for i=" + name(j) + " j=" + name(i));
      }
    }
  }

  void pair(const ValuationSet& a, const ValuationSet& b) {
    expect((a | b) == (b | a) && (a & b) == (b & a), "axiom 1: commutativity");
    expect((a & (a | b)) == a && (a | (a & b)) == a, "axiom 1: absorption");
    expect((a & b).complement() == (a.complement() | b.complement()), "axiom 1: De Morgan");
    for (Var i : vars) {
      auto lhs = cylindrify(a & cylindrify(b, i), i);
      auto rhs = cylindrify(a, i) & cylindrify(b, i);
      expect(lhs == rhs, "axiom 4 fails for i=" + name(i));
    }
  }

  void triple(const ValuationSet& a, const ValuationSet& b, const ValuationSet& c) {
    expect((a & (b | c)) == ((a & b) | (a & c)), "axiom 1: distributivity");
    expect(((a | b) | c) == (a | (b | c)), "axiom 1: associativity");
  }
};

ValuationSet subset_from_bits(const ValuationSpace& space, std::uint64_t mask) {
  auto s = ValuationSet::empty(space);
  for (std::size_t i = 0; i < space.count(); ++i)
    if ((mask >> i) & 1U) s.insert_index(i);
  return s;
}

ValuationSet random_subset(const ValuationSpace& space, std::mt19937_64& rng) {
  auto s = ValuationSet::empty(space);
  // Vary the density so sparse and dense subsets both show up.
  std::uniform_int_distribution<int> density(0, 8);
  int d = density(rng);
  std::uniform_int_distribution<int> coin(0, 7);
  for (std::size_t i = 0; i < space.count(); ++i)
    if (coin(rng) < d) s.insert_index(i);
  return s;
}

}  // namespace

AxiomReport check_cylindric_axioms(const ValuationSpace& space, std::size_t samples,
                                   std::uint64_t seed) {
  AxiomReport report;
  AxiomChecker chk(space, report);
  chk.constants();

  std::mt19937_64 rng(seed);
  std::vector<ValuationSet> subsets;
  if (space.count() <= 16) {
    report.exhaustive = true;
    std::uint64_t total = std::uint64_t{1} << space.count();
    for (std::uint64_t mask = 0; mask < total; ++mask)
      subsets.push_back(subset_from_bits(space, mask));
  } else {
    subsets.push_back(ValuationSet::empty(space));
    subsets.push_back(ValuationSet::full(space));
    while (subsets.size() < samples) subsets.push_back(random_subset(space, rng));
  }

  for (const auto& a : subsets) chk.single(a);

  if (report.exhaustive && subsets.size() <= 256) {
    for (const auto& a : subsets)
      for (const auto& b : subsets) chk.pair(a, b);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, subsets.size() - 1);
    for (std::size_t k = 0; k < subsets.size(); ++k) chk.pair(subsets[k], subsets[pick(rng)]);
  }
  std::uniform_int_distribution<std::size_t> pick(0, subsets.size() - 1);
  for (std::size_t k = 0; k < subsets.size(); ++k)
    chk.triple(subsets[k], subsets[pick(rng)], subsets[pick(rng)]);
  return report;
}

}  // namespace relcomp
