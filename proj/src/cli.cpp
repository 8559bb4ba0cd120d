#include "relcomp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "relcomp/analysis.hpp"
#include "relcomp/compile.hpp"
#include "relcomp/error.hpp"
#include "relcomp/normalize.hpp"
#include "relcomp/parser.hpp"
#include "relcomp/propcheck.hpp"

namespace relcomp {

std::string render_relation(const Relation& t, const Structure& m, const VarUniverse& u) {
  std::string out;
  if (t.columns().empty()) {
    out = "()";
  } else {
    for (std::size_t i = 0; i < t.columns().size(); ++i)
      out += (i ? " " : "") + u.name(t.columns()[i]);
  }
  out += '\n';
  std::vector<std::vector<std::string>> rows;
  for (const auto& tup : t.tuples()) {
    std::vector<std::string> row;
    for (Atom a : tup) row.push_back(m.atom_name(a));
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& row : rows) {
    if (row.empty()) out += "()";
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " " : "") + row[i];
    out += '\n';
  }
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Inputs {
  std::string scheme_file;
  std::string db_file;
  std::string formula_file;
  std::string formula_text;
  std::string expr_file;
  std::string expr_text;
  std::size_t cap = kDefaultValuationCap;
};

struct Session {
  DatabaseScheme scheme;
  VarUniverse universe;
  std::optional<Structure> database;
};

void load(Session& s, const Inputs& in, bool need_db) {
  if (!in.scheme_file.empty()) parse_scheme(read_file(in.scheme_file), s.scheme, s.universe);
  if (!in.db_file.empty())
    s.database = parse_database(read_file(in.db_file), s.scheme, s.universe);
  if (need_db && !s.database) throw Error("--db is required");
}

bool has_formula(const Inputs& in) {
  return !in.formula_file.empty() || !in.formula_text.empty();
}

bool has_expr(const Inputs& in) { return !in.expr_file.empty() || !in.expr_text.empty(); }

Formula load_formula(Session& s, const Inputs& in) {
  if (!in.formula_file.empty() && !in.formula_text.empty())
    throw Error("give either --formula or -e, not both");
  if (!has_formula(in)) throw Error("a formula is required (--formula or -e)");
  std::string text = in.formula_text.empty() ? read_file(in.formula_file) : in.formula_text;
  return parse_formula(text, s.scheme, s.universe);
}

RelExpr load_expr(Session& s, const Inputs& in) {
  if (!in.expr_file.empty() && !in.expr_text.empty())
    throw Error("give either --expr or -E, not both");
  std::string text = in.expr_text.empty() ? read_file(in.expr_file) : in.expr_text;
  return parse_expr(text, s.scheme, s.universe);
}

// compile_allowed with the failing subformula spelled out in the reason.
CompileResult compile_checked(const Formula& f, Session& s) {
  try {
    return compile_allowed(f, s.scheme, s.universe);
  } catch (const NotAllowedError& e) {
    AllowedReport r = e.report();
    if (r.failing) r.reason += " (at " + to_string(*r.failing, s.universe) + ")";
    throw NotAllowedError(r);
  }
}

std::string classes_text(const Partition& p, const VarUniverse& u) {
  std::string out = "{";
  bool first = true;
  for (const auto& cls : p.classes()) {
    VarSet xs(cls.begin(), cls.end());
    out += (first ? "" : ", ") + to_string(xs, u);
    first = false;
  }
  return out + "}";
}

int cmd_check(const Inputs& in, std::ostream& out) {
  Session s;
  load(s, in, false);
  Formula f = load_formula(s, in);
  VarInfo info = analyze(f);
  AllowedReport rep = is_allowed(f);
  const auto& u = s.universe;
  out << "formula: " << to_string(f, u) << '\n';
  out << "free: " << to_string(rep.fv, u) << '\n';
  out << "gen0: " << to_string(info.gen0, u) << '\n';
  out << "cogen0: " << to_string(info.cogen0, u) << '\n';
  out << "eq: " << classes_text(info.eq, u) << '\n';
  out << "coeq: " << classes_text(info.coeq, u) << '\n';
  out << "allowed: " << (rep.allowed ? "yes" : "no") << '\n';
  if (rep.allowed) return kExitOk;
  out << "reason: " << rep.reason << '\n';
  if (rep.failing) out << "failing: " << to_string(*rep.failing, u) << '\n';
  return kExitNotAllowed;
}

int cmd_compile(const Inputs& in, bool emit_normalized, bool emit_expr, bool emit_active,
                std::ostream& out) {
  Session s;
  load(s, in, false);
  Formula f = load_formula(s, in);
  if (!emit_normalized && !emit_expr && !emit_active) emit_normalized = emit_expr = true;
  const int selected = int(emit_normalized) + int(emit_expr) + int(emit_active);
  auto emit = [&](const char* label, const std::string& text) {
    if (selected > 1) out << label << ": ";
    out << text << '\n';
  };
  if (emit_normalized || emit_expr) {
    CompileResult c = compile_checked(f, s);
    if (emit_normalized) emit("normalized", to_string(c.normalized, s.universe));
    if (emit_expr) emit("expr", to_string(c.expr, s.universe));
  }
  if (emit_active) emit("active", to_string(expr_active(f, s.scheme, s.universe), s.universe));
  return kExitOk;
}

int cmd_eval(const Inputs& in, std::ostream& out) {
  Session s;
  load(s, in, true);
  if (has_formula(in) == has_expr(in)) throw Error("give exactly one of a formula or --expr");
  RelExpr e = has_expr(in) ? load_expr(s, in)
                           : compile_checked(load_formula(s, in), s).expr;
  out << render_relation(eval_expr(e, *s.database, s.scheme), *s.database, s.universe);
  return kExitOk;
}

int cmd_verify(const Inputs& in, std::ostream& out) {
  Session s;
  load(s, in, true);
  Formula f = load_formula(s, in);
  // An explicit expression replaces the compiled one.
  RelExpr e = has_expr(in) ? load_expr(s, in) : compile_checked(f, s).expr;
  VerifyResult v = verify(f, e, *s.database, s.scheme, in.cap);
  if (v.equal) {
    out << "equal over " << v.space_vars << " variables\n";
    return kExitOk;
  }
  out << "mismatch: witness";
  const Valuation& w = *v.witness;
  for (std::size_t i = 0; i < w.size(); ++i)
    out << ' ' << s.universe.name(Var{static_cast<std::uint32_t>(i)}) << '='
        << s.database->atom_name(w[i]);
  out << (v.witness_in_formula ? " satisfies the formula only" : " satisfies the expression only")
      << '\n';
  return kExitMismatch;
}

int cmd_fuzz(const GenConfig& cfg, const std::string& suite, std::ostream& out) {
  bool ok = true;
  for (const auto& rep : run_suites(suite, cfg)) {
    out << render(rep);
    ok = ok && rep.ok();
  }
  return ok ? kExitOk : kExitMismatch;
}

void add_inputs(CLI::App* cmd, Inputs& in, bool db, bool expr) {
  cmd->add_option("--scheme", in.scheme_file, "File of `relation r(x, y)` lines");
  if (db) cmd->add_option("--db", in.db_file, "Database file (scheme, domain and tuples)");
  cmd->add_option("--formula,-f", in.formula_file, "Formula file, `-` for stdin");
  cmd->add_option("-e", in.formula_text, "Formula text");
  if (expr) {
    cmd->add_option("--expr", in.expr_file, "Relational expression file");
    cmd->add_option("-E", in.expr_text, "Relational expression text");
  }
  cmd->add_option("--cap", in.cap, "Largest valuation space to enumerate")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile allowed first-order formulas into relational algebra"};
  app.name("relcomp");
  app.require_subcommand(1);

  Inputs in;
  bool emit_normalized = false, emit_expr = false, emit_active = false;
  GenConfig cfg;
  std::string suite = "all";

  auto* check = app.add_subcommand("check", "Report the static analysis and allowedness");
  add_inputs(check, in, false, false);

  auto* compile = app.add_subcommand("compile", "Normalize and translate an allowed formula");
  add_inputs(compile, in, false, false);
  compile->add_flag("--emit-normalized", emit_normalized, "Print the normalized formula");
  compile->add_flag("--emit-expr", emit_expr, "Print the relational expression");
  compile->add_flag("--emit-active", emit_active, "Print the active-domain translation");

  auto* eval = app.add_subcommand("eval", "Evaluate a formula or expression on a database");
  add_inputs(eval, in, true, true);

  auto* verify_cmd =
      app.add_subcommand("verify", "Compare the compiled expression with the formula");
  add_inputs(verify_cmd, in, true, true);

  auto* fuzz = app.add_subcommand("fuzz", "Run seeded property suites");
  fuzz->add_option("--seed", cfg.seed, "Generator seed");
  fuzz->add_option("--cases", cfg.case_count, "Cases per suite")->check(CLI::PositiveNumber);
  fuzz->add_option("--max-vars", cfg.max_vars, "Variables in generated formulas")
      ->check(CLI::Range(1, 6));
  fuzz->add_option("--max-dom", cfg.max_domain, "Largest domain")->check(CLI::Range(1, 6));
  fuzz->add_option("--max-depth", cfg.max_depth, "Deepest formula")->check(CLI::Range(1, 8));
  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  fuzz->add_option("--suite", suite, "Suite to run")->check(CLI::IsMember(choices));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(in, out);
    if (compile->parsed()) return cmd_compile(in, emit_normalized, emit_expr, emit_active, out);
    if (eval->parsed()) return cmd_eval(in, out);
    if (verify_cmd->parsed()) return cmd_verify(in, out);
    return cmd_fuzz(cfg, suite, out);
  } catch (const NotAllowedError& e) {
    err << "not allowed: " << e.report().reason << '\n';
    return kExitNotAllowed;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace relcomp
