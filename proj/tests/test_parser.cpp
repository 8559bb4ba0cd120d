#include <doctest.h>

#include "relcomp/error.hpp"
#include "relcomp/parser.hpp"
#include "relcomp/propcheck.hpp"

using namespace relcomp;

namespace {

struct Fixture {
  DatabaseScheme scheme;
  VarUniverse u;
  Fixture() { parse_scheme("relation r(x)\nrelation s(x, y)\n", scheme, u); }
  Formula f(const std::string& text) { return parse_formula(text, scheme, u); }
  Var v(const std::string& name) { return u.intern(name); }
};

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("grammar images") {
  Fixture fx;
  Var x = fx.v("x"), y = fx.v("y");
  CHECK(fx.f("exists y. s(x,y)") == Formula::exists(y, Formula::atom("s", {x, y})));
  CHECK(fx.f("x = y") == Formula::eq(x, y));
  CHECK(fx.f("1") == Formula::taut());
  CHECK(fx.f("r(x) | r(y) & s(x, y)") ==
        Formula::disj(Formula::atom("r", {x}),
                      Formula::conj(Formula::atom("r", {y}), Formula::atom("s", {x, y}))));
  CHECK(fx.f("!r(x) & r(y)") ==
        Formula::conj(Formula::neg(Formula::atom("r", {x})), Formula::atom("r", {y})));
}

TEST_CASE("quantifier bodies extend to the right") {
  Fixture fx;
  Var x = fx.v("x"), y = fx.v("y");
  Formula body = Formula::conj(Formula::atom("r", {y}), Formula::atom("s", {x, y}));
  CHECK(fx.f("exists y. r(y) & s(x, y)") == Formula::exists(y, body));
  CHECK(fx.f("exists x y. s(x, y)") ==
        Formula::exists(x, Formula::exists(y, Formula::atom("s", {x, y}))));
  CHECK(fx.f("exists x, y. s(x, y)") == fx.f("exists x y. s(x, y)"));
}

TEST_CASE("sugar is removed") {
  Fixture fx;
  Var x = fx.v("x");
  Formula r = Formula::atom("r", {x});
  Formula s = fx.f("s(x, x)");
  CHECK(fx.f("forall x. r(x)") == Formula::neg(Formula::exists(x, Formula::neg(r))));
  CHECK(fx.f("r(x) => s(x, x)") == Formula::disj(Formula::neg(r), s));
  CHECK(fx.f("r(x) <=> s(x, x)") == Formula::conj(Formula::disj(Formula::neg(r), s),
                                                  Formula::disj(Formula::neg(s), r)));
}

TEST_CASE("comments and line breaks") {
  Fixture fx;
  CHECK(fx.f("# suppliers\nr(x) &\n  s(x, y) # end\n") == fx.f("r(x) & s(x, y)"));
}

TEST_CASE("errors carry positions") {
  Fixture fx;
  try {
    fx.f("r(x,y)");
    FAIL("expected an arity error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 1);
  }
  try {
    fx.f("r(x) &\n  q(x)");
    FAIL("expected an unknown symbol");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(fx.f("r(x"), ParseError);
  CHECK_THROWS_AS(fx.f("r(x) r(x)"), ParseError);
  CHECK_THROWS_AS(fx.f("exists . r(x)"), ParseError);
  CHECK_THROWS_AS(fx.f(""), ParseError);
}

TEST_CASE("scheme files") {
  DatabaseScheme s;
  VarUniverse u;
  parse_scheme("# two relations\nrelation r(a)\n\nrelation t(a, b, c)\nrelation p()\n", s, u);
  CHECK(s.symbols() == std::vector<std::string>{"p", "r", "t"});
  CHECK(s.canonical("t").size() == 3);
  CHECK_THROWS_AS(parse_scheme("relation r(b)\n", s, u), ParseError);
  CHECK_THROWS_AS(parse_scheme("relaton r(a)\n", s, u), ParseError);
  CHECK_THROWS_AS(parse_scheme("relation q(a, a)\n", s, u), ParseError);
}

TEST_CASE("database files") {
  DatabaseScheme s;
  VarUniverse u;
  Structure m = parse_database(
      "relation r(y)\nrelation s(x, y)\nrelation e(x)\n"
      "domain: a b p q 12\nr: a\nr: b\ns: p a\ns: 12 b\n",
      s, u);
  CHECK(m.domain_size() == 5);
  CHECK(m.relation("r").size() == 2);
  CHECK(m.relation("s").count(Tuple{*m.atom("12"), *m.atom("b")}) == 1);
  CHECK(m.interprets("e"));
  CHECK(m.relation("e").empty());

  DatabaseScheme s2;
  VarUniverse u2;
  CHECK_THROWS_AS(parse_database("relation r(y)\nr: a\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain: a\ndomain: b\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain: a\nr: a a\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain: a\nr: b\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain: a\nq: a\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain: a a\n", s2, u2), ParseError);
  CHECK_THROWS_AS(parse_database("relation r(y)\ndomain:\n", s2, u2), ParseError);
}

TEST_CASE("relational expressions") {
  Fixture fx;
  Var x = fx.v("x"), y = fx.v("y");
  RelExpr div = parse_expr(
      "(project{x}(s) minus project{x}(((rename{y<-x}(r) join project{x}(s)) minus s)))",
      fx.scheme, fx.u);
  CHECK(div.scheme() == VarSet{x});
  CHECK(parse_expr("DEE", fx.scheme, fx.u) == RelExpr::dee());
  CHECK(parse_expr("rename{y<-x}(r)", fx.scheme, fx.u) ==
        RelExpr::rename(y, x, RelExpr::base("r", fx.scheme)));
  CHECK(parse_expr("select{x=y}(s)", fx.scheme, fx.u) ==
        RelExpr::select(x, y, RelExpr::base("s", fx.scheme)));
  CHECK(parse_expr("project{}(s)", fx.scheme, fx.u).scheme().empty());
  CHECK_THROWS_AS(parse_expr("(r union s)", fx.scheme, fx.u), ParseError);
  CHECK_THROWS_AS(parse_expr("rename{x<-y}(s)", fx.scheme, fx.u), ParseError);
  CHECK_THROWS_AS(parse_expr("project{y}(r)", fx.scheme, fx.u), ParseError);
  CHECK_THROWS_AS(parse_expr("q", fx.scheme, fx.u), ParseError);
  CHECK_THROWS_AS(parse_expr("(r join s", fx.scheme, fx.u), ParseError);
}

TEST_CASE("expression printing round trips through the parser") {
  Fixture fx;
  std::vector<std::string> texts = {
      "DEE",
      "(r union rename{x<-y}(project{y}(s)))",
      "select{x=y}((r join rename{y<-x}(r)))",
      "(s minus (s join DEE))",
      "project{}(select{x=x}(s))",
  };
  for (const auto& t : texts) CHECK(to_string(parse_expr(t, fx.scheme, fx.u), fx.u) == t);
}

}  // TEST_SUITE
