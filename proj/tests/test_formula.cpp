#include <doctest.h>

#include "oracle.hpp"
#include "relcomp/error.hpp"
#include "relcomp/parser.hpp"
#include "relcomp/propcheck.hpp"

using namespace relcomp;

TEST_SUITE("formula") {

TEST_CASE("universe interns names once and appends fresh variables") {
  VarUniverse u;
  Var x = u.intern("x"), y = u.intern("y");
  CHECK(u.intern("x") == x);
  CHECK(x.ord == 0);
  CHECK(y.ord == 1);
  CHECK(u.find("y") == y);
  CHECK_FALSE(u.find("q").has_value());
  Var z = u.fresh();
  CHECK(u.name(z) == "_z0");
  CHECK(u.is_fresh(z));
  CHECK_FALSE(u.is_fresh(x));
}

TEST_CASE("fresh pool is reused and avoids the given variables") {
  VarUniverse u;
  u.intern("x");
  auto a = u.fresh_outside({}, 2);
  auto b = u.fresh_outside({a[0]}, 2);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == a[1]);
  CHECK(b[1] != a[0]);
  CHECK(u.size() == 4);
}

TEST_CASE("scheme declarations") {
  VarUniverse u;
  Var x = u.intern("x"), y = u.intern("y");
  DatabaseScheme s;
  s.declare("r", {x});
  s.declare("r", {x});
  CHECK_THROWS_AS(s.declare("r", {y}), SchemeError);
  CHECK_THROWS_AS(s.declare("s", {x, x}), SchemeError);
  s.declare("s", {x, y});
  CHECK(s.signature().arity("s") == 2u);
  CHECK(s.symbols() == std::vector<std::string>{"r", "s"});
}

TEST_CASE("free variables follow the definition") {
  VarUniverse u;
  Var x = u.intern("x"), y = u.intern("y"), z = u.intern("z");
  CHECK(Formula::taut().free_vars().empty());
  CHECK(Formula::exists(y, Formula::atom("s", {x, y})).free_vars() == VarSet{x});
  CHECK(Formula::conj(Formula::atom("r", {x}), Formula::eq(x, z)).free_vars() == VarSet{x, z});

  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 300;
  cfg.seed = 5;
  for (const auto& f : gen_formula(cfg, b.scheme, b.vars)) CHECK(f.free_vars() == oracle::fv(f));
}

TEST_CASE("complement strips or adds exactly one negation") {
  Formula r = Formula::atom("r", {Var{0}});
  CHECK(complement(Formula::neg(r)) == r);
  CHECK(complement(r) == Formula::neg(r));
  CHECK(complement(Formula::neg(Formula::neg(r))) == Formula::neg(r));
}

TEST_CASE("quantifier blocks and conjunction lists") {
  Var x{0}, y{1};
  Formula s = Formula::atom("s", {x, y});
  Formula q = exists_all({y, x}, s);
  REQUIRE(q.is(FormulaKind::Exists));
  CHECK(q.bound() == x);
  CHECK(q.child().bound() == y);
  CHECK(exists_all({}, s) == s);
  CHECK(conj_all({}) == Formula::taut());
  CHECK(conj_all({s}) == s);
  Formula r = Formula::atom("r", {x});
  CHECK(conj_all({r, s, r}) == Formula::conj(Formula::conj(r, s), r));
}

TEST_CASE("substitution chains unfold one step per pair") {
  VarUniverse u;
  Var x = u.intern("x"), y = u.intern("y"), z = u.intern("z");
  Formula r = Formula::atom("r", {x});
  CHECK(subst_chain(r, {}) == r);
  CHECK(subst_chain(r, {{x, y}}) == Formula::exists(x, Formula::conj(r, Formula::eq(x, y))));
  Formula two = subst_chain(r, {{x, z}, {z, y}});
  Formula inner = Formula::exists(x, Formula::conj(r, Formula::eq(x, z)));
  CHECK(two == Formula::exists(z, Formula::conj(inner, Formula::eq(z, y))));
}

TEST_CASE("atom renaming is equivalent to the target atom") {
  VarUniverse u;
  Var x1 = u.intern("x1"), x2 = u.intern("x2");
  DatabaseScheme s;
  s.declare("r", {x1, x2});
  Formula canon = Formula::atom("r", {x1, x2});

  Structure m({"a", "b", "c"});
  m.add_tuple("r", {0, 0});
  m.add_tuple("r", {0, 1});
  m.add_tuple("r", {2, 2});
  m.add_tuple("r", {1, 0});

  for (auto targets : std::vector<std::vector<Var>>{{x1, x1}, {x2, x1}, {x2, x2}, {x1, x2}}) {
    Formula renamed = atom_rename(canon, targets, u);
    Formula plain = Formula::atom("r", targets);
    CHECK(renamed.free_vars() == plain.free_vars());
    const std::size_t n = std::max(oracle::max_ord(renamed), oracle::max_ord(plain));
    CHECK(oracle::models(renamed, m, n) == oracle::models(plain, m, n));
    for (Var v : all_vars(renamed))
      if (v != x1 && v != x2) CHECK(u.is_fresh(v));
  }
}

TEST_CASE("validation against the scheme") {
  VarUniverse u;
  Var x = u.intern("x");
  DatabaseScheme s;
  s.declare("r", {x});
  validate(Formula::atom("r", {x}), s);
  CHECK_THROWS_AS(validate(Formula::atom("q", {x}), s), SchemeError);
  CHECK_THROWS_AS(validate(Formula::atom("r", {x, x}), s), SchemeError);
}

TEST_CASE("printing and parsing round trip") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 300;
  cfg.seed = 17;
  for (const auto& f : gen_formula(cfg, b.scheme, b.vars)) {
    std::string text = to_string(f, b.universe);
    CHECK_MESSAGE(parse_formula(text, b.scheme, b.universe) == f, text);
  }
}

TEST_CASE("depth and size") {
  Formula r = Formula::atom("r", {Var{0}});
  CHECK(r.depth() == 1);
  CHECK(r.size() == 1);
  Formula f = Formula::neg(Formula::conj(r, Formula::exists(Var{0}, r)));
  CHECK(f.depth() == 4);
  CHECK(f.size() == 5);
}

}  // TEST_SUITE
