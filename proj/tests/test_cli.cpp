#include <doctest.h>

#include <sstream>

#include "relcomp/cli.hpp"

using namespace relcomp;

namespace {

const std::string kData = RELCOMP_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "relcomp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check reports the analysis") {
  Run r = run({"check", "--scheme", kData + "/division.scheme", "--formula",
               kData + "/division.formula"});
  CHECK(r.code == kExitOk);
  CHECK(r.out ==
        "formula: (exists y. s(x, y)) & !(exists y. r(y) & !s(x, y))\n"
        "free: {x}\n"
        "gen0: {x}\n"
        "cogen0: {}\n"
        "eq: {}\n"
        "coeq: {}\n"
        "allowed: yes\n");
}

TEST_CASE("check on a formula that is not allowed") {
  Run r = run({"check", "--scheme", kData + "/unary.scheme", "-e", "!r(x)"});
  CHECK(r.code == kExitNotAllowed);
  CHECK(r.out.find("allowed: no\n") != std::string::npos);
  CHECK(r.out.find("reason: free variables differ from gen0\n") != std::string::npos);
  CHECK(r.out.find("failing: !r(x)\n") != std::string::npos);
}

TEST_CASE("compile") {
  Run r = run({"compile", "--emit-expr", "--scheme", kData + "/division.scheme", "--formula",
               kData + "/division.formula"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(project{x}(s) minus project{x}(((r join project{x}(s)) minus s)))\n");

  Run both = run({"compile", "-e", "1"});
  CHECK(both.out == "normalized: 1\nexpr: DEE\n");

  Run rename = run({"compile", "--emit-expr", "--scheme", kData + "/unary.scheme", "-e",
                    "exists x. r(x) & x = y"});
  CHECK(rename.out == "rename{y<-x}(r)\n");

  Run active = run({"compile", "--emit-active", "--scheme", kData + "/unary.scheme", "-e",
                    "r(x)"});
  CHECK(active.code == kExitOk);
  CHECK(active.out == "r\n");

  Run bad = run({"compile", "--scheme", kData + "/unary.scheme", "-e", "!r(x)"});
  CHECK(bad.code == kExitNotAllowed);
  CHECK(bad.err.rfind("not allowed: ", 0) == 0);
  CHECK(bad.err.find("(at !r(x))") != std::string::npos);
}

TEST_CASE("eval") {
  Run r = run({"eval", "--db", kData + "/division.db", "--formula",
               kData + "/division.formula"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "x\np\n");

  Run dee = run({"eval", "--db", kData + "/division.db", "-E", "DEE"});
  CHECK(dee.out == "()\n()\n");

  Run empty = run({"eval", "--db", kData + "/unary.db", "-e", "r(x) & !r(x)"});
  CHECK(empty.out == "x\n");

  Run ren = run({"eval", "--db", kData + "/unary.db", "-E", "rename{y<-x}(r)"});
  CHECK(ren.out == "y\na\nc\n");

  Run none = run({"eval", "--db", kData + "/unary.db"});
  CHECK(none.code == kExitUsage);
  Run nodb = run({"eval", "-e", "1"});
  CHECK(nodb.code == kExitUsage);
}

TEST_CASE("verify") {
  Run ok = run({"verify", "--db", kData + "/division.db", "--formula",
                kData + "/division.formula"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out == "equal over 2 variables\n");

  Run mismatch = run({"verify", "--db", kData + "/unary.db", "-e", "exists x. r(x) & x = y",
                      "-E", "project{}(r)"});
  CHECK(mismatch.code == kExitMismatch);
  CHECK(mismatch.out.rfind("mismatch: witness x=", 0) == 0);
  CHECK(mismatch.out.find("satisfies the expression only\n") != std::string::npos);

  Run capped = run({"verify", "--db", kData + "/division.db", "--formula",
                    kData + "/division.formula", "--cap", "10"});
  CHECK(capped.code == kExitResource);
  CHECK(capped.err == "resource limit: valuation space 4^2 exceeds the cap of 10\n");
}

TEST_CASE("input errors") {
  Run arity = run({"check", "--scheme", kData + "/unary.scheme", "-e", "r(x,y)"});
  CHECK(arity.code == kExitUsage);
  CHECK(arity.err ==
        "error: parse error at 1:1: relation 'r' has arity 1 but got 2 arguments\n");

  Run missing = run({"check", "--scheme", kData + "/nope.scheme", "-e", "1"});
  CHECK(missing.code == kExitUsage);
  CHECK(missing.err.find("cannot read") != std::string::npos);

  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"check", "-e", "1", "--formula", kData + "/division.formula"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("fuzz") {
  Run r = run({"fuzz", "--suite", "eqcoeq", "--cases", "20", "--seed", "4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("suite eqcoeq: 20 cases, ok\n", 0) == 0);
  CHECK(run({"fuzz", "--suite", "bogus"}).code == kExitUsage);
  CHECK(run({"fuzz", "--max-vars", "9"}).code == kExitUsage);
  CHECK(run({"fuzz", "--cases", "0"}).code == kExitUsage);
}

}  // TEST_SUITE
