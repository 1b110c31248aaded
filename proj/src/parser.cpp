#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "viewshift/syntax.hpp"

namespace viewshift {
namespace {

enum class Tok { Ident, ConId, QVar, QCon, Int, String, Sym, Keyword, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;       // identifier / symbol / keyword / decoded string
  std::string qualifier;  // for QVar / QCon
  std::int64_t value = 0;
  int line = 0;
  int col = 0;       // 0 for End so that it closes every layout block
  int text_col = 0;  // where the token really sits, for diagnostics
  bool line_start = false;
};

struct CommentLine {
  int line;
  std::string text;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run(std::vector<CommentLine>* comments) {
    std::vector<Token> out;
    int last_line = 0;
    while (true) {
      skip_space_and_comments(comments);
      Token t;
      t.line = line_;
      t.col = col_;
      t.text_col = col_;
      t.line_start = line_ != last_line;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.line_start = true;
        t.col = 0;
        out.push_back(t);
        return out;
      }
      lex_one(t);
      last_line = t.line;
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, col_, msg); }

  void skip_space_and_comments(std::vector<CommentLine>* comments) {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == '\n' || c == ' ' || c == '\r') {
        advance();
      } else if (c == '\t') {
        fail("tab characters are not allowed");
      } else if (c == '-' && peek(1) == '-') {
        const bool whole_line = col_ == 1;
        const int line = line_;
        std::size_t start = pos_ + 2;
        while (pos_ < src_.size() && peek() != '\n') advance();
        if (whole_line && comments) {
          std::string text(src_.substr(start, pos_ - start));
          if (!text.empty() && text.front() == ' ') text.erase(0, 1);
          while (!text.empty() && text.back() == '\r') text.pop_back();
          comments->push_back({line, std::move(text)});
        }
      } else {
        return;
      }
    }
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string read_ident() {
    std::string s;
    while (ident_char(peek())) {
      s += peek();
      advance();
    }
    return s;
  }

  void lex_one(Token& t) {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits += peek();
        advance();
      }
      t.kind = Tok::Int;
      t.text = digits;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.value);
      if (ec != std::errc()) throw SyntaxError(t.line, t.col, "integer literal out of range");
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string id = read_ident();
      if (peek() == '.' && (std::isalpha(static_cast<unsigned char>(peek(1))) || peek(1) == '_')) {
        advance();
        std::string name = read_ident();
        t.qualifier = id;
        t.text = name;
        t.kind = std::isupper(static_cast<unsigned char>(name[0])) ? Tok::QCon : Tok::QVar;
        return;
      }
      t.kind = Tok::ConId;
      t.text = id;
      return;
    }
    if (std::islower(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = read_ident();
      t.text = id;
      if (id == "_")
        t.kind = Tok::Sym;
      else if (is_keyword(id))
        t.kind = Tok::Keyword;
      else
        t.kind = Tok::Ident;
      return;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (true) {
        if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal");
        char d = peek();
        advance();
        if (d == '"') break;
        if (d == '\\') {
          char e = peek();
          advance();
          switch (e) {
            case 'n': s += '\n'; break;
            case 't': s += '\t'; break;
            case '\\': s += '\\'; break;
            case '"': s += '"'; break;
            default: fail("unknown escape sequence");
          }
        } else {
          s += d;
        }
      }
      t.kind = Tok::String;
      t.text = std::move(s);
      return;
    }
    static const char* two_char[] = {"->", "++"};
    for (const char* sym : two_char) {
      if (c == sym[0] && peek(1) == sym[1]) {
        advance();
        advance();
        t.kind = Tok::Sym;
        t.text = sym;
        return;
      }
    }
    if (std::string("(),;{}=|+*").find(c) != std::string::npos) {
      advance();
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  // -- entry points ---------------------------------------------------------

  Module module(const std::vector<CommentLine>& comments) {
    Module m;
    expect_keyword("module");
    const Token& name = cur();
    if (name.kind != Tok::ConId) fail("expected module name");
    m.name = name.text;
    next();
    if (is_sym("(")) {
      next();
      std::vector<std::string> exports;
      if (!is_sym(")")) {
        while (true) {
          const Token& t = cur();
          if (t.kind != Tok::Ident && t.kind != Tok::ConId) fail("expected exported identifier");
          exports.push_back(t.text);
          next();
          if (is_sym(",")) {
            next();
            continue;
          }
          break;
        }
      }
      expect_sym(")");
      m.exports = std::move(exports);
    }
    expect_keyword("where");

    std::map<int, std::string> comment_at;
    for (const auto& c : comments) comment_at[c.line] = c.text;

    std::set<std::string> seen;
    std::string last_fun;
    while (cur().kind != Tok::End) {
      const Token& t = cur();
      if (!t.line_start || t.col != 1) fail("declarations must start in column 1");
      const int decl_line = t.line;
      if (t.kind == Tok::Keyword && t.text == "import") {
        next();
        if (cur().kind != Tok::ConId) fail("expected module name after import");
        m.imports.push_back(cur().text);
        next();
        last_fun.clear();
        continue;
      }
      std::vector<std::string> comment = attached_comment(comment_at, decl_line);
      if (t.kind == Tok::Keyword && t.text == "data") {
        DataDecl d = data_decl();
        if (!seen.insert(d.name).second)
          throw SyntaxError(decl_line, 1, "duplicate top-level binding " + d.name);
        m.decls.push_back(TopDecl{std::move(d), std::move(comment)});
        last_fun.clear();
        continue;
      }
      if (t.kind != Tok::Ident) fail("expected a declaration");
      auto [fname, eq] = equation(1);
      if (fname == last_fun) {
        FunDecl& f = m.decls.back().fun();
        if (eq.patterns.size() != f.arity())
          throw SyntaxError(decl_line, 1, "equations of " + fname + " have different arities");
        f.equations.push_back(std::move(eq));
        continue;
      }
      if (!seen.insert(fname).second)
        throw SyntaxError(decl_line, 1, "duplicate top-level binding " + fname);
      FunDecl f{fname, {}};
      f.equations.push_back(std::move(eq));
      m.decls.push_back(TopDecl{std::move(f), std::move(comment)});
      last_fun = fname;
    }
    return m;
  }

  TopDecl single_decl() {
    if (cur().kind == Tok::Keyword && cur().text == "data") {
      DataDecl d = data_decl();
      expect_end();
      return TopDecl{std::move(d), {}};
    }
    if (cur().kind != Tok::Ident) fail("expected a declaration");
    auto [fname, eq] = equation(1);
    FunDecl f{fname, {}};
    f.equations.push_back(std::move(eq));
    while (cur().kind == Tok::Ident && cur().line_start && cur().col == 1) {
      auto [n, e] = equation(1);
      if (n != fname) fail("expected a single declaration");
      if (e.patterns.size() != f.arity()) fail("equations of " + n + " have different arities");
      f.equations.push_back(std::move(e));
    }
    expect_end();
    return TopDecl{std::move(f), {}};
  }

  Expr whole_expr() {
    Expr e = expr(0);
    expect_end();
    return e;
  }

private:
  // -- token helpers --------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(cur().line, cur().text_col, msg + (cur().kind == Tok::End ? " (at end of input)" : " near '" + cur().text + "'"));
  }
  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_keyword(const char* s) const { return cur().kind == Tok::Keyword && cur().text == s; }
  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  void expect_keyword(const char* s) {
    if (!is_keyword(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  void expect_end() {
    if (cur().kind != Tok::End) fail("unexpected trailing input");
  }

  // A token that starts a line at or left of the active layout column ends the
  // current construct.
  bool at_layout_break(int limit) const {
    const Token& t = cur();
    return t.kind == Tok::End || (t.line_start && t.col <= limit);
  }

  static std::vector<std::string> attached_comment(const std::map<int, std::string>& comments, int line) {
    std::vector<std::string> block;
    for (int l = line - 1;; --l) {
      auto it = comments.find(l);
      if (it == comments.end()) break;
      block.insert(block.begin(), it->second);
    }
    return block;
  }

  // -- declarations ---------------------------------------------------------

  DataDecl data_decl() {
    expect_keyword("data");
    if (cur().kind != Tok::ConId) fail("expected type name");
    DataDecl d{cur().text, {}};
    next();
    expect_sym("=");
    std::set<std::string> names;
    while (true) {
      if (cur().kind != Tok::ConId) fail("expected constructor name");
      ConstructorDef c{cur().text, {}};
      if (!names.insert(c.name).second) fail("duplicate constructor " + c.name);
      next();
      while (!at_layout_break(1) && (cur().kind == Tok::ConId || is_sym("("))) c.args.push_back(atype());
      d.constructors.push_back(std::move(c));
      if (!at_layout_break(1) && is_sym("|")) {
        next();
        continue;
      }
      break;
    }
    if (!at_layout_break(1)) fail("unexpected token in data declaration");
    return d;
  }

  TypeExpr atype() {
    if (cur().kind == Tok::ConId) {
      TypeExpr t{cur().text, {}};
      next();
      return t;
    }
    expect_sym("(");
    std::vector<TypeExpr> items{atype()};
    while (is_sym(",")) {
      next();
      items.push_back(atype());
    }
    expect_sym(")");
    if (items.size() == 1) return items.front();
    return TypeExpr{"", std::move(items)};
  }

  // Parses `name apat* = expr [where locals]` with `limit` as the layout column
  // of the declaration.
  std::pair<std::string, Equation> equation(int limit) {
    std::string name = cur().text;
    next();
    Equation eq;
    while (!is_sym("=")) {
      if (at_layout_break(limit)) fail("expected '=' in equation for " + name);
      eq.patterns.push_back(apattern());
    }
    next();
    eq.rhs = expr(limit);
    check_linear(eq.patterns);
    if (!at_layout_break(limit) && is_keyword("where")) {
      next();
      if (at_layout_break(limit)) fail("empty where block");
      const int col = cur().col;
      std::set<std::string> names;
      while (true) {
        LocalDef d = local_def(col);
        if (!names.insert(d.name).second) fail("duplicate local binding " + d.name);
        eq.locals.push_back(std::move(d));
        if (cur().kind != Tok::End && cur().line_start && cur().col == col && cur().col > limit) continue;
        break;
      }
    }
    if (!at_layout_break(limit)) fail("unexpected token after equation");
    return {name, std::move(eq)};
  }

  LocalDef local_def(int limit) {
    if (cur().kind != Tok::Ident) fail("expected local definition");
    LocalDef d;
    d.name = cur().text;
    next();
    std::set<std::string> seen;
    while (cur().kind == Tok::Ident) {
      if (!seen.insert(cur().text).second) fail("parameter bound twice");
      d.params.push_back(cur().text);
      next();
    }
    expect_sym("=");
    d.body = expr(limit);
    return d;
  }

  // -- patterns -------------------------------------------------------------

  Pattern pattern() {
    if (cur().kind == Tok::ConId || cur().kind == Tok::QCon) {
      PCon p{cur().qualifier, cur().text, {}};
      next();
      while (starts_apattern()) p.args.push_back(apattern());
      return p;
    }
    return apattern();
  }

  bool starts_apattern() const {
    const Token& t = cur();
    if (t.line_start) return false;
    return t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::ConId || t.kind == Tok::QCon ||
           (t.kind == Tok::Sym && (t.text == "_" || t.text == "("));
  }

  Pattern apattern() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Ident: {
        PVar p{t.text};
        next();
        return p;
      }
      case Tok::Int: {
        PInt p{t.value};
        next();
        return p;
      }
      case Tok::ConId:
      case Tok::QCon: {
        PCon p{t.qualifier, t.text, {}};
        next();
        return p;
      }
      default: break;
    }
    if (is_sym("_")) {
      next();
      return PWild{};
    }
    if (is_sym("(")) {
      next();
      std::vector<Pattern> items{pattern()};
      while (is_sym(",")) {
        next();
        items.push_back(pattern());
      }
      expect_sym(")");
      if (items.size() == 1) return std::move(items.front());
      return PTuple{std::move(items)};
    }
    fail("expected a pattern");
  }

  void collect_vars(const Pattern& p, std::vector<std::string>& out) {
    if (const auto* v = p.try_as<PVar>()) out.push_back(v->name);
    if (const auto* c = p.try_as<PCon>())
      for (const auto& a : c->args) collect_vars(a, out);
    if (const auto* t = p.try_as<PTuple>())
      for (const auto& a : t->items) collect_vars(a, out);
  }

  void check_linear(const std::vector<Pattern>& ps) {
    std::vector<std::string> vars;
    for (const auto& p : ps) collect_vars(p, vars);
    std::set<std::string> seen;
    for (const auto& v : vars)
      if (!seen.insert(v).second) fail("variable " + v + " bound twice in pattern");
  }

  // -- expressions ----------------------------------------------------------

  static int precedence(const std::string& op) {
    if (op == "*") return 7;
    if (op == "+") return 6;
    if (op == "++") return 5;
    return -1;
  }

  static InfixOp op_of(const std::string& op) {
    if (op == "*") return InfixOp::Mul;
    if (op == "+") return InfixOp::Add;
    return InfixOp::Concat;
  }

  Expr expr(int limit) {
    if (is_keyword("case")) {
      next();
      Case c;
      c.scrutinee = expr(limit);
      expect_keyword("of");
      expect_sym("{");
      while (true) {
        Pattern p = pattern();
        check_linear({p});
        expect_sym("->");
        Expr body = expr(limit);
        c.alts.push_back(Alt{std::move(p), std::move(body)});
        if (is_sym(";")) {
          next();
          continue;
        }
        break;
      }
      expect_sym("}");
      return c;
    }
    if (is_keyword("let")) {
      next();
      Let l;
      std::set<std::string> names;
      while (true) {
        LocalDef d = local_def(limit);
        if (!names.insert(d.name).second) fail("duplicate let binding " + d.name);
        l.defs.push_back(std::move(d));
        if (is_sym(";")) {
          next();
          continue;
        }
        break;
      }
      expect_keyword("in");
      l.body = expr(limit);
      return l;
    }
    return infix_expr(limit, 0);
  }

  // Precedence climbing; `+` and `*` associate left, `++` right.
  Expr infix_expr(int limit, int min_prec) {
    Expr lhs = application(limit);
    while (!at_layout_break(limit) && cur().kind == Tok::Sym) {
      const int prec = precedence(cur().text);
      if (prec < 0 || prec < min_prec) break;
      const std::string op = cur().text;
      next();
      const int next_min = op == "++" ? prec : prec + 1;
      Expr rhs = infix_expr(limit, next_min);
      lhs = infix(op_of(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  bool starts_atom(int limit) const {
    if (at_layout_break(limit)) return false;
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::ConId:
      case Tok::QVar:
      case Tok::QCon:
      case Tok::Int:
      case Tok::String: return true;
      case Tok::Keyword: return t.text == "show" || t.text == "print";
      case Tok::Sym: return t.text == "(";
      default: return false;
    }
  }

  Expr application(int limit) {
    if (!starts_atom(limit)) fail("expected an expression");
    Expr e = atom(limit);
    while (starts_atom(limit)) e = app(std::move(e), atom(limit));
    return e;
  }

  Expr atom(int limit) {
    const Token t = cur();
    switch (t.kind) {
      case Tok::Ident: next(); return var(t.text);
      case Tok::QVar: next(); return var(t.text, t.qualifier);
      case Tok::ConId: next(); return con(t.text);
      case Tok::QCon: next(); return con(t.text, t.qualifier);
      case Tok::Int: next(); return int_lit(t.value);
      case Tok::String: next(); return str_lit(t.text);
      case Tok::Keyword:
        next();
        return Builtin{t.text == "show" ? BuiltinFn::Show : BuiltinFn::Print};
      default: break;
    }
    expect_sym("(");
    std::vector<Expr> items{expr(limit)};
    while (is_sym(",")) {
      next();
      items.push_back(expr(limit));
    }
    expect_sym(")");
    if (items.size() == 1) return std::move(items.front());
    return Tuple{std::move(items)};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Module parse_module(std::string_view source) {
  std::vector<CommentLine> comments;
  auto toks = Lexer(source).run(&comments);
  return Parser(std::move(toks)).module(comments);
}

TopDecl parse_decl(std::string_view source) {
  auto toks = Lexer(source).run(nullptr);
  return Parser(std::move(toks)).single_decl();
}

Expr parse_expr(std::string_view source) {
  auto toks = Lexer(source).run(nullptr);
  // Expressions parsed on their own have no enclosing layout column.
  for (auto& t : toks)
    if (t.kind != Tok::End) t.line_start = false;
  return Parser(std::move(toks)).whole_expr();
}

}  // namespace viewshift
