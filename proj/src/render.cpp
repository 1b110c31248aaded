#include <sstream>

#include "viewshift/syntax.hpp"

namespace viewshift {
namespace {

// Precedence levels for minimal parenthesisation.
constexpr int kLevelOpen = 0;   // case / let: extend as far right as possible
constexpr int kLevelApp = 10;   // function application
constexpr int kLevelAtom = 11;

int op_precedence(InfixOp op) {
  switch (op) {
    case InfixOp::Mul: return 7;
    case InfixOp::Add: return 6;
    case InfixOp::Concat: return 5;
  }
  return 0;
}

const char* op_text(InfixOp op) {
  switch (op) {
    case InfixOp::Mul: return "*";
    case InfixOp::Add: return "+";
    case InfixOp::Concat: return "++";
  }
  return "?";
}

bool right_assoc(InfixOp op) { return op == InfixOp::Concat; }

std::string qualified(const std::string& q, const std::string& n) {
  return q.empty() ? n : q + "." + n;
}

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

int level_of(const Expr& e) {
  if (e.is<Case>() || e.is<Let>()) return kLevelOpen;
  if (const auto* i = e.try_as<Infix>()) return op_precedence(i->op);
  if (e.is<App>()) return kLevelApp;
  return kLevelAtom;
}

std::string render_local(const LocalDef& d);

std::string render_at(const Expr& e, int min_level);

std::string render_plain(const Expr& e) {
  struct Visitor {
    std::string operator()(const Var& v) const { return qualified(v.qualifier, v.name); }
    std::string operator()(const Con& c) const { return qualified(c.qualifier, c.name); }
    std::string operator()(const IntLit& i) const { return std::to_string(i.value); }
    std::string operator()(const StrLit& s) const { return escape(s.value); }
    std::string operator()(const Builtin& b) const { return b.fn == BuiltinFn::Show ? "show" : "print"; }
    std::string operator()(const App& a) const {
      return render_at(*a.fn, kLevelApp) + " " + render_at(*a.arg, kLevelAtom);
    }
    std::string operator()(const Infix& i) const {
      const int p = op_precedence(i.op);
      const int lmin = right_assoc(i.op) ? p + 1 : p;
      const int rmin = right_assoc(i.op) ? p : p + 1;
      return render_at(*i.lhs, lmin) + " " + op_text(i.op) + " " + render_at(*i.rhs, rmin);
    }
    std::string operator()(const Tuple& t) const {
      std::string out = "(";
      for (std::size_t k = 0; k < t.items.size(); ++k) {
        if (k) out += ", ";
        out += render_at(t.items[k], kLevelOpen);
      }
      return out + ")";
    }
    std::string operator()(const Case& c) const {
      std::string out = "case " + render_at(*c.scrutinee, kLevelOpen) + " of { ";
      for (std::size_t k = 0; k < c.alts.size(); ++k) {
        if (k) out += "; ";
        out += render_pattern(c.alts[k].pattern) + " -> " + render_at(c.alts[k].body, kLevelOpen);
      }
      return out + " }";
    }
    std::string operator()(const Let& l) const {
      std::string out = "let ";
      for (std::size_t k = 0; k < l.defs.size(); ++k) {
        if (k) out += "; ";
        out += render_local(l.defs[k]);
      }
      return out + " in " + render_at(*l.body, kLevelOpen);
    }
  };
  return std::visit(Visitor{}, e.node);
}

std::string render_at(const Expr& e, int min_level) {
  std::string s = render_plain(e);
  // Open constructs must be bracketed anywhere but a delimited position.
  if (level_of(e) < min_level) return "(" + s + ")";
  return s;
}

std::string render_local(const LocalDef& d) {
  std::string out = d.name;
  for (const auto& p : d.params) out += " " + p;
  return out + " = " + render_at(d.body, kLevelOpen);
}

std::string render_apattern(const Pattern& p) {
  if (const auto* c = p.try_as<PCon>(); c && !c->args.empty()) return "(" + render_pattern(p) + ")";
  return render_pattern(p);
}

std::string render_type(const TypeExpr& t) {
  if (!t.is_tuple()) return t.name;
  std::string out = "(";
  for (std::size_t k = 0; k < t.items.size(); ++k) {
    if (k) out += ", ";
    out += render_type(t.items[k]);
  }
  return out + ")";
}

}  // namespace

std::string render_pattern(const Pattern& p) {
  struct Visitor {
    std::string operator()(const PVar& v) const { return v.name; }
    std::string operator()(const PInt& i) const { return std::to_string(i.value); }
    std::string operator()(const PWild&) const { return "_"; }
    std::string operator()(const PCon& c) const {
      std::string out = qualified(c.qualifier, c.name);
      for (const auto& a : c.args) out += " " + render_apattern(a);
      return out;
    }
    std::string operator()(const PTuple& t) const {
      std::string out = "(";
      for (std::size_t k = 0; k < t.items.size(); ++k) {
        if (k) out += ", ";
        out += render_pattern(t.items[k]);
      }
      return out + ")";
    }
  };
  return std::visit(Visitor{}, p.node);
}

std::string render_expr(const Expr& expr) { return render_at(expr, kLevelOpen); }

std::string render_equation(const std::string& name, const Equation& eq) {
  std::string out = name;
  for (const auto& p : eq.patterns) out += " " + render_apattern(p);
  out += " = " + render_expr(eq.rhs);
  if (!eq.locals.empty()) {
    out += "\n    where";
    for (const auto& d : eq.locals) out += "\n        " + render_local(d);
  }
  return out;
}

std::string render_fun(const FunDecl& fun) {
  std::string out;
  for (std::size_t k = 0; k < fun.equations.size(); ++k) {
    if (k) out += "\n";
    out += render_equation(fun.name, fun.equations[k]);
  }
  return out;
}

std::string render_decl(const TopDecl& decl) {
  if (decl.is_fun()) return render_fun(decl.fun());
  const DataDecl& d = decl.data();
  std::string out = "data " + d.name + " =";
  for (std::size_t k = 0; k < d.constructors.size(); ++k) {
    out += k ? " | " : " ";
    out += d.constructors[k].name;
    for (const auto& a : d.constructors[k].args) out += " " + render_type(a);
  }
  return out;
}

std::string render_module(const Module& module) {
  std::ostringstream out;
  out << "module " << module.name;
  if (module.exports) {
    out << " (";
    for (std::size_t k = 0; k < module.exports->size(); ++k) out << (k ? ", " : "") << (*module.exports)[k];
    out << ")";
  }
  out << " where\n";
  if (!module.imports.empty()) {
    out << "\n";
    for (const auto& i : module.imports) out << "import " << i << "\n";
  }
  for (const auto& d : module.decls) {
    out << "\n";
    for (const auto& line : d.comment) out << (line.empty() ? "--" : "-- " + line) << "\n";
    out << render_decl(d) << "\n";
  }
  return out.str();
}

}  // namespace viewshift
