#include "relcomp/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "relcomp/error.hpp"

namespace relcomp {

namespace {

enum class Tok {
  Ident,
  One,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Colon,
  Eq,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Arrow,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::One: return "'1'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'=>'";
    case Tok::Iff: return "'<=>'";
    case Tok::Arrow: return "'<-'";
    case Tok::End: return "end of input";
  }
  return "token";
}

std::vector<Token> lex(std::string_view src, std::size_t line0 = 1, std::size_t col0 = 1) {
  std::vector<Token> out;
  std::size_t line = line0, col = col0;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t len = 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(at(len))) || at(len) == '_') ++len;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, len));
    } else if (c == '1' && !std::isalnum(static_cast<unsigned char>(at(1)))) {
      t.kind = Tok::One;
    } else if (c == '<' && at(1) == '=' && at(2) == '>') {
      t.kind = Tok::Iff;
      len = 3;
    } else if (c == '<' && at(1) == '-') {
      t.kind = Tok::Arrow;
      len = 2;
    } else if (c == '=' && at(1) == '>') {
      t.kind = Tok::Imp;
      len = 2;
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case ',': t.kind = Tok::Comma; break;
        case '.': t.kind = Tok::Dot; break;
        case ':': t.kind = Tok::Colon; break;
        case '=': t.kind = Tok::Eq; break;
        case '!': t.kind = Tok::Not; break;
        case '&': t.kind = Tok::And; break;
        case '|': t.kind = Tok::Or; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    out.push_back(std::move(t));
    i += len;
    col += len;
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }

  Token take() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  Token expect(Tok k, const char* context) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + " " + context);
    return take();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
    throw ParseError(msg + ", found " + got, t.line, t.col);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Formulas

class FormulaParser {
 public:
  FormulaParser(Cursor& cur, const DatabaseScheme& scheme, VarUniverse& u)
      : cur_(cur), scheme_(scheme), u_(u) {}

  Formula formula() { return iff(); }

 private:
  static Formula implies(const Formula& a, const Formula& b) {
    return Formula::disj(Formula::neg(a), b);
  }

  Formula iff() {
    Formula f = imp();
    while (cur_.at(Tok::Iff)) {
      cur_.take();
      Formula g = imp();
      f = Formula::conj(implies(f, g), implies(g, f));
    }
    return f;
  }

  Formula imp() {
    Formula f = disj();
    while (cur_.at(Tok::Imp)) {
      cur_.take();
      f = implies(f, disj());
    }
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (cur_.at(Tok::Or)) {
      cur_.take();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (cur_.at(Tok::And)) {
      cur_.take();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  std::vector<Var> varlist(Tok stop) {
    std::vector<Var> vs;
    vs.push_back(u_.intern(cur_.expect(Tok::Ident, "in variable list").text));
    while (!cur_.at(stop)) {
      if (cur_.at(Tok::Comma)) cur_.take();
      if (!cur_.at(Tok::Ident)) cur_.fail("expected a variable");
      vs.push_back(u_.intern(cur_.take().text));
    }
    return vs;
  }

  Formula unary() {
    if (cur_.at(Tok::Not)) {
      cur_.take();
      return Formula::neg(unary());
    }
    if (cur_.at_word("exists") || cur_.at_word("forall")) {
      bool universal = cur_.take().text == "forall";
      std::vector<Var> vs = varlist(Tok::Dot);
      cur_.expect(Tok::Dot, "after quantified variables");
      Formula body = formula();
      for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        body = universal ? Formula::neg(Formula::exists(*it, Formula::neg(body)))
                         : Formula::exists(*it, body);
      return body;
    }
    return primary();
  }

  Formula primary() {
    if (cur_.at(Tok::One)) {
      cur_.take();
      return Formula::taut();
    }
    if (cur_.at(Tok::LParen)) {
      cur_.take();
      Formula f = formula();
      cur_.expect(Tok::RParen, "to close '('");
      return f;
    }
    if (!cur_.at(Tok::Ident)) cur_.fail("expected a formula");
    Token name = cur_.take();
    if (cur_.at(Tok::Eq)) {
      cur_.take();
      Var x = u_.intern(name.text);
      Var y = u_.intern(cur_.expect(Tok::Ident, "after '='").text);
      return Formula::eq(x, y);
    }
    if (!cur_.at(Tok::LParen)) cur_.fail("expected '(' or '=' after '" + name.text + "'");
    cur_.take();
    std::vector<Var> args;
    if (!cur_.at(Tok::RParen)) args = varlist(Tok::RParen);
    cur_.expect(Tok::RParen, "to close the argument list");
    auto arity = scheme_.signature().arity(name.text);
    if (!arity)
      throw ParseError("unknown relation symbol '" + name.text + "'", name.line, name.col);
    if (*arity != args.size())
      throw ParseError("relation '" + name.text + "' has arity " + std::to_string(*arity) +
                           " but got " + std::to_string(args.size()) + " arguments",
                       name.line, name.col);
    return Formula::atom(name.text, std::move(args));
  }

  Cursor& cur_;
  const DatabaseScheme& scheme_;
  VarUniverse& u_;
};

// ---------------------------------------------------------------------------
// Line-oriented files

std::string_view strip_comment(std::string_view line) {
  auto h = line.find('#');
  return h == std::string_view::npos ? line : line.substr(0, h);
}

bool blank(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

// `relation r(x1, x2)` on one line, already lexed.
void scheme_line(Cursor& cur, DatabaseScheme& scheme, VarUniverse& u) {
  Token kw = cur.take();
  Token name = cur.expect(Tok::Ident, "after 'relation'");
  cur.expect(Tok::LParen, "after the relation name");
  std::vector<Var> vars;
  while (!cur.at(Tok::RParen)) {
    if (!vars.empty() && cur.at(Tok::Comma)) cur.take();
    vars.push_back(u.intern(cur.expect(Tok::Ident, "in the relation header").text));
  }
  cur.take();
  if (!cur.at(Tok::End)) cur.fail("expected end of line");
  try {
    scheme.declare(name.text, std::move(vars));
  } catch (const SchemeError& e) {
    throw ParseError(e.what(), name.line, name.col);
  }
  (void)kw;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t lineno = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = strip_comment(text.substr(start, end - start));
    if (!blank(line)) fn(line, lineno);
    ++lineno;
    start = end + 1;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const DatabaseScheme& scheme,
                      VarUniverse& universe) {
  Cursor cur(lex(text));
  FormulaParser p(cur, scheme, universe);
  Formula f = p.formula();
  if (!cur.at(Tok::End)) cur.fail("expected end of formula");
  return f;
}

void parse_scheme(std::string_view text, DatabaseScheme& scheme, VarUniverse& universe) {
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    Cursor cur(lex(line, lineno));
    if (!cur.at_word("relation")) cur.fail("expected 'relation'");
    scheme_line(cur, scheme, universe);
  });
}

Structure parse_database(std::string_view text, DatabaseScheme& scheme,
                         VarUniverse& universe) {
  struct PendingTuple {
    std::string symbol;
    std::vector<std::string> atoms;
    std::size_t line, col;
  };
  std::optional<std::vector<std::string>> domain;
  std::vector<PendingTuple> tuples;

  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      Cursor cur(lex(line, lineno));
      if (!cur.at_word("relation")) cur.fail("expected 'relation' or a 'name:' line");
      scheme_line(cur, scheme, universe);
      return;
    }
    // Atoms may be digit strings, so only the head goes through the lexer.
    Cursor cur(lex(line.substr(0, colon), lineno));
    Token head = cur.expect(Tok::Ident, "at the start of a database line");
    if (!cur.at(Tok::End)) cur.fail("expected ':'");
    std::string_view rest = line.substr(colon + 1);
    std::vector<std::string> words;
    std::istringstream in{std::string(rest)};
    for (std::string w; in >> w;) words.push_back(w);
    if (head.text == "domain") {
      if (domain) throw ParseError("second 'domain' line", head.line, head.col);
      if (words.empty()) throw ParseError("the domain must be non-empty", head.line, head.col);
      std::set<std::string> seen;
      for (const auto& w : words)
        if (!seen.insert(w).second)
          throw ParseError("domain atom '" + w + "' listed twice", head.line, head.col);
      domain = words;
      return;
    }
    tuples.push_back({head.text, words, head.line, head.col});
  });

  if (!domain) throw ParseError("missing 'domain' line", 1, 1);
  Structure m(*domain);
  for (const auto& sym : scheme.symbols()) m.declare(sym);
  for (const auto& t : tuples) {
    auto arity = scheme.signature().arity(t.symbol);
    if (!arity) throw ParseError("unknown relation symbol '" + t.symbol + "'", t.line, t.col);
    if (*arity != t.atoms.size())
      throw ParseError("relation '" + t.symbol + "' has arity " + std::to_string(*arity) +
                           " but the tuple has " + std::to_string(t.atoms.size()) + " entries",
                       t.line, t.col);
    Tuple row;
    for (const auto& a : t.atoms) {
      auto id = m.atom(a);
      if (!id) throw ParseError("atom '" + a + "' is not in the domain", t.line, t.col);
      row.push_back(*id);
    }
    m.add_tuple(t.symbol, std::move(row));
  }
  return m;
}

namespace {

class ExprParser {
 public:
  ExprParser(Cursor& cur, const DatabaseScheme& scheme, VarUniverse& u)
      : cur_(cur), scheme_(scheme), u_(u) {}

  RelExpr expr() {
    if (cur_.at(Tok::LParen)) {
      cur_.take();
      RelExpr l = expr();
      Token op = cur_.expect(Tok::Ident, "as a binary operator");
      RelExpr r = expr();
      cur_.expect(Tok::RParen, "to close the binary expression");
      return wrap(op, [&] {
        if (op.text == "union") return RelExpr::unite(l, r);
        if (op.text == "minus") return RelExpr::diff(l, r);
        if (op.text == "join") return RelExpr::join(l, r);
        throw ParseError("unknown operator '" + op.text + "'", op.line, op.col);
      });
    }
    Token name = cur_.expect(Tok::Ident, "at the start of an expression");
    if (name.text == "DEE") return RelExpr::dee();
    if (name.text == "project") {
      cur_.expect(Tok::LBrace, "after 'project'");
      VarSet keep;
      while (!cur_.at(Tok::RBrace)) {
        if (!keep.empty() && cur_.at(Tok::Comma)) cur_.take();
        keep.insert(var());
      }
      cur_.take();
      RelExpr e = arg();
      return wrap(name, [&] { return RelExpr::project(keep, e); });
    }
    if (name.text == "select") {
      cur_.expect(Tok::LBrace, "after 'select'");
      Var x = var();
      cur_.expect(Tok::Eq, "in the selection condition");
      Var y = var();
      cur_.expect(Tok::RBrace, "to close the selection condition");
      RelExpr e = arg();
      return wrap(name, [&] { return RelExpr::select(x, y, e); });
    }
    if (name.text == "rename") {
      cur_.expect(Tok::LBrace, "after 'rename'");
      Var y = var();
      cur_.expect(Tok::Arrow, "in the rename clause");
      Var x = var();
      cur_.expect(Tok::RBrace, "to close the rename clause");
      RelExpr e = arg();
      return wrap(name, [&] { return RelExpr::rename(y, x, e); });
    }
    if (!scheme_.has(name.text))
      throw ParseError("unknown relation symbol '" + name.text + "'", name.line, name.col);
    return RelExpr::base(name.text, scheme_);
  }

 private:
  Var var() { return u_.intern(cur_.expect(Tok::Ident, "as a variable").text); }

  RelExpr arg() {
    cur_.expect(Tok::LParen, "before the operand");
    RelExpr e = expr();
    cur_.expect(Tok::RParen, "after the operand");
    return e;
  }

  // Scheme violations are reported at the operator's position.
  template <class Fn>
  RelExpr wrap(const Token& at, Fn&& build) {
    try {
      return build();
    } catch (const SchemeError& e) {
      throw ParseError(e.what(), at.line, at.col);
    }
  }

  Cursor& cur_;
  const DatabaseScheme& scheme_;
  VarUniverse& u_;
};

}  // namespace

RelExpr parse_expr(std::string_view text, const DatabaseScheme& scheme, VarUniverse& universe) {
  Cursor cur(lex(text));
  ExprParser p(cur, scheme, universe);
  RelExpr e = p.expr();
  if (!cur.at(Tok::End)) cur.fail("expected end of expression");
  return e;
}

}  // namespace relcomp
