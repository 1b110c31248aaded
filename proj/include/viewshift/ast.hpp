#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viewshift/box.hpp"

namespace viewshift {

struct Expr;
struct Pattern;

// ---------------------------------------------------------------------------
// Expressions

/// Variable reference. An empty qualifier means the name is looked up in the
/// usual scope order (locals, then the module's top level and its imports).
struct Var {
  std::string qualifier;
  std::string name;
  bool operator==(const Var&) const = default;
};

/// Data constructor used as an expression (applied through App).
struct Con {
  std::string qualifier;
  std::string name;
  bool operator==(const Con&) const = default;
};

struct IntLit {
  std::int64_t value = 0;
  bool operator==(const IntLit&) const = default;
};

struct StrLit {
  std::string value;
  bool operator==(const StrLit&) const = default;
};

struct App {
  Box<Expr> fn;
  Box<Expr> arg;
  bool operator==(const App&) const = default;
};

enum class InfixOp { Add, Mul, Concat };

struct Infix {
  InfixOp op = InfixOp::Add;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Infix&) const = default;
};

struct Tuple {
  std::vector<Expr> items;  // arity >= 2
  bool operator==(const Tuple&) const = default;
};

struct Alt;
struct LocalDef;

struct Case {
  Box<Expr> scrutinee;
  std::vector<Alt> alts;
  bool operator==(const Case&) const = default;
};

/// Recursive let: every binding is in scope in every binding body and in the body.
struct Let {
  std::vector<LocalDef> defs;
  Box<Expr> body;
  bool operator==(const Let&) const = default;
};

enum class BuiltinFn { Show, Print };

struct Builtin {
  BuiltinFn fn = BuiltinFn::Show;
  bool operator==(const Builtin&) const = default;
};

struct Expr {
  using Node = std::variant<Var, Con, IntLit, StrLit, App, Infix, Tuple, Case, Let, Builtin>;
  Node node;

  Expr() : node(IntLit{}) {}
  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, Expr>)
  Expr(T&& n) : node(std::forward<T>(n)) {}

  template <typename T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <typename T>
  const T& as() const { return std::get<T>(node); }
  template <typename T>
  T& as() { return std::get<T>(node); }
  template <typename T>
  const T* try_as() const { return std::get_if<T>(&node); }
  template <typename T>
  T* try_as() { return std::get_if<T>(&node); }

  bool operator==(const Expr&) const = default;
};

// ---------------------------------------------------------------------------
// Patterns

struct PVar {
  std::string name;
  bool operator==(const PVar&) const = default;
};
struct PInt {
  std::int64_t value = 0;
  bool operator==(const PInt&) const = default;
};
struct PWild {
  bool operator==(const PWild&) const = default;
};
/// Constructor pattern with curried sub-patterns. A tupled constructor such as
/// `Add (e1, e2)` has a single PTuple sub-pattern.
struct PCon {
  std::string qualifier;
  std::string name;
  std::vector<Pattern> args;
  bool operator==(const PCon&) const = default;
};
struct PTuple {
  std::vector<Pattern> items;
  bool operator==(const PTuple&) const = default;
};

struct Pattern {
  using Node = std::variant<PVar, PInt, PWild, PCon, PTuple>;
  Node node;

  Pattern() : node(PWild{}) {}
  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, Pattern>)
  Pattern(T&& n) : node(std::forward<T>(n)) {}

  template <typename T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <typename T>
  const T& as() const { return std::get<T>(node); }
  template <typename T>
  T& as() { return std::get<T>(node); }
  template <typename T>
  const T* try_as() const { return std::get_if<T>(&node); }
  template <typename T>
  T* try_as() { return std::get_if<T>(&node); }

  bool operator==(const Pattern&) const = default;
};

struct Alt {
  Pattern pattern;
  Expr body;
  bool operator==(const Alt&) const = default;
};

/// Local binding (where-block entry or let binding): `name params = body`.
struct LocalDef {
  std::string name;
  std::vector<std::string> params;
  Expr body;
  bool operator==(const LocalDef&) const = default;
};

// ---------------------------------------------------------------------------
// Declarations

struct Equation {
  std::vector<Pattern> patterns;
  Expr rhs;
  std::vector<LocalDef> locals;  // where-block, empty when absent
  bool operator==(const Equation&) const = default;
};

/// Function or value binding. A value is a FunDecl with one zero-pattern equation.
struct FunDecl {
  std::string name;
  std::vector<Equation> equations;
  std::size_t arity() const { return equations.empty() ? 0 : equations.front().patterns.size(); }
  bool operator==(const FunDecl&) const = default;
};

/// Type expression appearing in a constructor definition: a named type or a tuple.
struct TypeExpr {
  std::string name;               // empty for tuples
  std::vector<TypeExpr> items;    // tuple components
  bool is_tuple() const { return name.empty(); }
  bool operator==(const TypeExpr&) const = default;
};

enum class ArgShape { Curried, Tupled };

struct ConstructorDef {
  std::string name;
  std::vector<TypeExpr> args;  // curried argument types
  /// A constructor whose single argument is a tuple type is "tupled".
  ArgShape shape() const {
    return args.size() == 1 && args.front().is_tuple() ? ArgShape::Tupled : ArgShape::Curried;
  }
  bool operator==(const ConstructorDef&) const = default;
};

struct DataDecl {
  std::string name;
  std::vector<ConstructorDef> constructors;
  bool operator==(const DataDecl&) const = default;
};

struct TopDecl {
  std::variant<DataDecl, FunDecl> body;
  /// Attached `--` comment block, one entry per line with the `-- ` prefix removed.
  std::vector<std::string> comment;

  bool is_fun() const { return std::holds_alternative<FunDecl>(body); }
  bool is_data() const { return std::holds_alternative<DataDecl>(body); }
  FunDecl& fun() { return std::get<FunDecl>(body); }
  const FunDecl& fun() const { return std::get<FunDecl>(body); }
  DataDecl& data() { return std::get<DataDecl>(body); }
  const DataDecl& data() const { return std::get<DataDecl>(body); }
  const std::string& name() const {
    return is_fun() ? fun().name : data().name;
  }
  bool operator==(const TopDecl&) const = default;
};

struct Module {
  std::string name;
  std::optional<std::vector<std::string>> exports;  // nullopt: export everything
  std::vector<std::string> imports;
  std::vector<TopDecl> decls;

  FunDecl* find_fun(const std::string& n);
  const FunDecl* find_fun(const std::string& n) const;
  std::optional<std::size_t> index_of(const std::string& n) const;
  const ConstructorDef* find_constructor(const std::string& n) const;
  bool imports_module(const std::string& m) const;

  bool operator==(const Module&) const = default;
};

struct Project {
  std::map<std::string, Module> modules;

  Module* find(const std::string& m);
  const Module* find(const std::string& m) const;

  bool operator==(const Project&) const = default;
};

// ---------------------------------------------------------------------------
// Small constructors used throughout the engine and the tests.

inline Expr var(std::string name, std::string qualifier = {}) {
  return Var{std::move(qualifier), std::move(name)};
}
inline Expr con(std::string name, std::string qualifier = {}) {
  return Con{std::move(qualifier), std::move(name)};
}
inline Expr int_lit(std::int64_t v) { return IntLit{v}; }
inline Expr str_lit(std::string s) { return StrLit{std::move(s)}; }
inline Expr app(Expr fn, Expr arg) { return App{std::move(fn), std::move(arg)}; }
Expr apply(Expr fn, std::vector<Expr> args);
inline Expr infix(InfixOp op, Expr lhs, Expr rhs) {
  return Infix{op, std::move(lhs), std::move(rhs)};
}
inline Pattern pvar(std::string name) { return PVar{std::move(name)}; }

/// Decomposes a left-nested application `f a1 ... an` into head and arguments.
struct Spine {
  const Expr* head = nullptr;
  std::vector<const Expr*> args;
};
Spine spine_of(const Expr& e);

bool is_constructor_name(const std::string& s);
bool is_variable_name(const std::string& s);
bool is_keyword(const std::string& s);

}  // namespace viewshift
