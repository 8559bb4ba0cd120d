#include <doctest.h>

#include "oracle.hpp"
#include "relcomp/analysis.hpp"
#include "relcomp/parser.hpp"
#include "relcomp/propcheck.hpp"

using namespace relcomp;

namespace {

struct Fixture {
  DatabaseScheme scheme;
  VarUniverse u;
  Fixture() {
    parse_scheme("relation r(x)\nrelation s(x, y)\nrelation t(x1, x2)\n", scheme, u);
  }
  Formula f(const std::string& text) { return parse_formula(text, scheme, u); }
  Var v(const std::string& name) { return u.intern(name); }
};

std::set<Atom> active_atoms(const Structure& m) {
  std::set<Atom> out;
  for (const auto& [sym, rel] : m.relations())
    for (const auto& t : rel) out.insert(t.begin(), t.end());
  return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("equality and coequality on small formulas") {
  Fixture fx;
  Var x1 = fx.v("x1"), x2 = fx.v("x2"), x3 = fx.v("x3"), x = fx.v("x"), y = fx.v("y");
  CHECK(eq_vars(fx.f("x1 = x2 & t(x1, x3) & x2 = x3")) ==
        Partition::closure({{x1, x2}, {x2, x3}}));
  CHECK(eq_vars(Formula::taut()).is_identity());
  CHECK(coeq_vars(Formula::taut()).is_identity());
  CHECK(eq_vars(fx.f("!(x = y)")).is_identity());
  CHECK(coeq_vars(fx.f("!(x = y)")) == Partition::closure({{x, y}}));
  // The bound variable leaves its class, the rest stays connected.
  CHECK(eq_vars(fx.f("exists y. x = y & y = x1")) == Partition::closure({{x, x1}}));
  // Disjunction keeps only what both sides agree on.
  CHECK(eq_vars(fx.f("x = y & r(x) | x = y & s(x, y)")) == Partition::closure({{x, y}}));
  CHECK(eq_vars(fx.f("x = y | r(x)")).is_identity());
}

TEST_CASE("positive and negative formulas") {
  Fixture fx;
  CHECK(is_positive(fx.f("r(x)")));
  CHECK(is_negative(fx.f("!r(x)")));
  CHECK(is_positive(fx.f("!!r(x)")));
  CHECK(is_negative(fx.f("!r(x) & !s(x, y)")));
  CHECK(is_positive(fx.f("r(x) & !s(x, y)")));
  CHECK(is_positive(fx.f("exists x. r(x)")));
}

TEST_CASE("generated variables") {
  Fixture fx;
  Var x1 = fx.v("x1"), x2 = fx.v("x2"), x = fx.v("x"), y = fx.v("y");
  CHECK(gen0(fx.f("t(x1, x2)")) == VarSet{x1, x2});
  CHECK(gen0(fx.f("r(x) & x = y")) == VarSet{x, y});
  CHECK(gen0(fx.f("!r(x)")).empty());
  CHECK(cogen0(fx.f("r(x)")).empty());
  CHECK(cogen0(fx.f("!r(x)")) == VarSet{x});
  CHECK(gen0(fx.f("x = y")).empty());
  CHECK(cogen0(fx.f("x = y")).empty());
  CHECK(gen0(fx.f("r(x) | s(x, y)")) == VarSet{x});
  CHECK(gen0(fx.f("exists y. s(x, y)")) == VarSet{x});
}

TEST_CASE("allowedness") {
  Fixture fx;
  AllowedReport neg = is_allowed(fx.f("!r(x)"));
  CHECK_FALSE(neg.allowed);
  CHECK(neg.fv == VarSet{fx.v("x")});
  CHECK(neg.gen0.empty());
  REQUIRE(neg.failing.has_value());

  AllowedReport div = is_allowed(fx.f("(exists y. s(x, y)) & !(exists y. r(y) & !s(x, y))"));
  CHECK(div.allowed);
  CHECK_FALSE(div.failing.has_value());
  CHECK(div.gen0 == VarSet{fx.v("x")});

  CHECK(is_allowed(Formula::taut()).allowed);

  // A quantifier over an ungenerated variable fails at that subformula.
  Formula inner = fx.f("exists y. !s(x, y)");
  AllowedReport q = is_allowed(Formula::conj(fx.f("r(x)"), inner));
  CHECK_FALSE(q.allowed);
  REQUIRE(q.failing.has_value());
  CHECK(*q.failing == inner);
}

TEST_CASE("analysis summary matches the separate functions") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 300;
  cfg.seed = 41;
  for (const auto& f : gen_formula(cfg, b.scheme, b.vars)) {
    VarInfo info = analyze(f);
    CHECK(info.eq == eq_vars(f));
    CHECK(info.coeq == coeq_vars(f));
    CHECK(info.gen0 == gen0(f));
    CHECK(info.cogen0 == cogen0(f));
    CHECK(info.positive == is_positive(f));
    CHECK(is_allowed(f).fv == f.free_vars());
  }
}

TEST_CASE("static facts are sound on random structures") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 250;
  cfg.seed = 43;
  auto formulas = gen_formula(cfg, b.scheme, b.vars);
  auto structures = gen_structure(cfg, b.scheme);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const Formula& f = formulas[i];
    const Structure& m = structures[i];
    const std::size_t n = std::max<std::size_t>(oracle::max_ord(f), b.vars.size());
    auto yes = oracle::models(f, m, n);
    std::set<Valuation> no;
    for (auto a : oracle::assignments([&] {
           std::vector<Var> vs;
           for (std::uint32_t k = 0; k < n; ++k) vs.push_back(Var{k});
           return vs;
         }(), m.domain_size())) {
      Valuation v(n);
      for (std::uint32_t k = 0; k < n; ++k) v[k] = a[Var{k}];
      if (!yes.count(v)) no.insert(v);
    }
    VarInfo info = analyze(f);
    for (auto [x, y] : info.eq.pairs())
      for (const auto& v : yes) CHECK(v[x.ord] == v[y.ord]);
    for (auto [x, y] : info.coeq.pairs())
      for (const auto& v : no) CHECK(v[x.ord] == v[y.ord]);
    if (info.positive) CHECK(info.coeq.is_identity());
    else CHECK(info.eq.is_identity());
    CHECK(eq_vars(complement(f)) == info.coeq);
    CHECK(coeq_vars(complement(f)) == info.eq);

    const auto active = active_atoms(m);
    for (const auto& v : yes)
      for (Var x : info.gen0) CHECK(active.count(v[x.ord]));
    for (const auto& v : no)
      for (Var x : info.cogen0) CHECK(active.count(v[x.ord]));
  }
}

}  // TEST_SUITE
