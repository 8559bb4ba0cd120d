#include <doctest.h>

#include <chrono>

#include "relcomp/analysis.hpp"
#include "relcomp/error.hpp"
#include "relcomp/propcheck.hpp"

using namespace relcomp;

namespace {

void kinds(const Formula& f, std::set<FormulaKind>& out) {
  out.insert(f.kind());
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Exists:
      kinds(f.child(), out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      kinds(f.left(), out);
      kinds(f.right(), out);
      break;
    default:
      break;
  }
}

bool mentions(const Formula& f, const std::string& symbol) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return f.symbol() == symbol;
    case FormulaKind::Not:
    case FormulaKind::Exists:
      return mentions(f.child(), symbol);
    case FormulaKind::And:
    case FormulaKind::Or:
      return mentions(f.left(), symbol) || mentions(f.right(), symbol);
    default:
      return false;
  }
}

// Some subformula !(exists y. a & !b).
bool division_shaped(const Formula& f) {
  if (f.is(FormulaKind::Not) && f.child().is(FormulaKind::Exists)) {
    Formula body = f.child().child();
    if (body.is(FormulaKind::And) && body.right().is(FormulaKind::Not)) return true;
  }
  switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Exists:
      return division_shaped(f.child());
    case FormulaKind::And:
    case FormulaKind::Or:
      return division_shaped(f.left()) || division_shaped(f.right());
    default:
      return false;
  }
}

std::size_t tuple_count(const Structure& m) {
  std::size_t n = 0;
  for (const auto& [sym, rel] : m.relations()) n += rel.size();
  return n;
}

}  // namespace

TEST_SUITE("propcheck") {

TEST_CASE("configuration bounds") {
  GenConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_domain = 0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}

TEST_CASE("the bench vocabulary") {
  Bench b = make_bench(4);
  CHECK(b.vars.size() == 4);
  CHECK(b.universe.name(b.vars[0]) == "x");
  CHECK(b.scheme.symbols() == std::vector<std::string>{"p", "r", "s", "t"});
  CHECK(b.scheme.canonical("t").size() == 3);
  CHECK(make_bench(1).vars.size() == 1);
}

TEST_CASE("streams are deterministic") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 200;
  cfg.seed = 99;
  CHECK(gen_formula(cfg, b.scheme, b.vars) == gen_formula(cfg, b.scheme, b.vars));
  CHECK(gen_allowed(cfg, b.scheme, b.vars) == gen_allowed(cfg, b.scheme, b.vars));
  auto m1 = gen_structure(cfg, b.scheme), m2 = gen_structure(cfg, b.scheme);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(describe(m1[i]) == describe(m2[i]));
  GenConfig other = cfg;
  other.seed = 100;
  CHECK(gen_formula(cfg, b.scheme, b.vars) != gen_formula(other, b.scheme, b.vars));
}

TEST_CASE("depth one gives only leaves") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.max_depth = 1;
  cfg.case_count = 300;
  for (const auto& f : gen_formula(cfg, b.scheme, b.vars)) {
    CHECK(f.depth() == 1);
    CHECK((f.is(FormulaKind::Atom) || f.is(FormulaKind::Taut) || f.is(FormulaKind::Eq)));
  }
}

TEST_CASE("every connective shows up") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.max_depth = 4;
  cfg.case_count = 1000;
  std::set<FormulaKind> seen;
  for (const auto& f : gen_formula(cfg, b.scheme, b.vars)) {
    CHECK(f.depth() <= 4);
    kinds(f, seen);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("the allowed stream") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 500;
  cfg.seed = 3;
  auto start = std::chrono::steady_clock::now();
  auto fs = gen_allowed(cfg, b.scheme, b.vars);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
  REQUIRE(fs.size() == 500);
  std::size_t division = 0, deep = 0;
  for (const auto& f : fs) {
    CHECK(is_allowed(f).allowed);
    CHECK(f.depth() <= 5);
    if (f.is(FormulaKind::Not) && f.child().is(FormulaKind::Atom))
      CHECK(f.free_vars().empty());
    if (division_shaped(f)) ++division;
    if (f.depth() >= 4) ++deep;
  }
  CHECK(division > 0);
  CHECK(deep > 100);
}

TEST_CASE("structures") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 120;
  cfg.seed = 5;
  auto ms = gen_structure(cfg, b.scheme);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Structure& m = ms[i];
    CHECK(m.domain_size() >= 1);
    CHECK(m.domain_size() <= 3);
    m.validate(b.scheme);
    for (const auto& [sym, rel] : m.relations()) CHECK(rel.size() <= 6);
    if (i % 50 == 0) CHECK(tuple_count(m) == 0);
    if (i % 50 == 1) CHECK(m.domain_size() == 1);
  }
}

TEST_CASE("random relations") {
  Bench b = make_bench(4);
  CaseGen g(GenConfig{}, b.scheme, b.vars);
  VarSet s{b.vars[0], b.vars[2]};
  for (int i = 0; i < 50; ++i) {
    Relation t = g.relation(s, 3);
    CHECK(t.scheme() == s);
    for (const auto& tup : t.tuples())
      for (Atom a : tup) CHECK(a < 3);
  }
}

TEST_CASE("local spaces renumber variables") {
  Bench b = make_bench(6);
  Var z = b.vars[2], v = b.vars[5];
  Formula f = Formula::conj(Formula::atom("r", {v}), Formula::eq(v, z));
  Structure m({"a", "b"});
  m.add_tuple("r", {1});
  LocalSpace ls(m, {f});
  CHECK(ls.space().nvars() == 2);
  CHECK(ls.holds(v));
  CHECK_FALSE(ls.holds(b.vars[0]));
  ValuationSet s = ls.eval(f);
  REQUIRE(s.count() == 1);
  std::size_t i = s.indices().front();
  CHECK(ls.value(i, v) == 1);
  CHECK(ls.value(i, z) == 1);
  CHECK(s.subset_of(ls.diagonal(v, z)));
}

TEST_CASE("shrinking reaches a small counterexample") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 60;
  cfg.seed = 13;
  auto fs = gen_formula(cfg, b.scheme, b.vars);
  auto ms = gen_structure(cfg, b.scheme);
  FailPredicate fails = [](const Formula& f, const Structure& m) {
    return mentions(f, "s") && !m.relation("r").empty();
  };
  std::size_t tried = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!fails(fs[i], ms[i])) continue;
    ++tried;
    Shrunk s = shrink(fs[i], ms[i], fails, false, b.scheme);
    CHECK(fails(s.formula, s.structure));
    CHECK(s.formula.size() == 1);
    CHECK(tuple_count(s.structure) == 1);
    CHECK(s.structure.domain_size() == ms[i].domain_size());
  }
  CHECK(tried > 0);
}

TEST_CASE("shrinking can keep allowedness") {
  Bench b = make_bench(4);
  GenConfig cfg;
  cfg.case_count = 40;
  cfg.seed = 17;
  auto fs = gen_allowed(cfg, b.scheme, b.vars);
  auto ms = gen_structure(cfg, b.scheme);
  FailPredicate fails = [](const Formula& f, const Structure&) {
    return f.free_vars().size() >= 2;
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!fails(fs[i], ms[i])) continue;
    Shrunk s = shrink(fs[i], ms[i], fails, true, b.scheme);
    CHECK(is_allowed(s.formula).allowed);
    CHECK(s.formula.size() <= fs[i].size());
  }
}

TEST_CASE("suites pass and report deterministically") {
  GenConfig cfg;
  cfg.case_count = 30;
  cfg.seed = 21;
  auto reports = run_suites("all", cfg);
  REQUIRE(reports.size() == suite_names().size());
  for (const auto& r : reports) {
    CHECK_MESSAGE(r.ok(), render(r));
    CHECK(r.cases == 30);
    for (const auto& [name, t] : r.props) CHECK_MESSAGE(t.checks > 0, r.name << "." << name);
  }
  auto again = run_suites("all", cfg);
  for (std::size_t i = 0; i < reports.size(); ++i) CHECK(render(reports[i]) == render(again[i]));
  CHECK(render(reports[0]).rfind("suite imli: 30 cases, ok\n", 0) == 0);
  CHECK_THROWS_AS(run_suite("nope", cfg), PreconditionError);
}

}  // TEST_SUITE
