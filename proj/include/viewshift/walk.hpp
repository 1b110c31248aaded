#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "viewshift/ast.hpp"

namespace viewshift {

enum class BinderKind { Pattern, Param, Where, Let };

/// A local binder in scope at some expression node.
struct Binder {
  std::string name;
  BinderKind kind = BinderKind::Pattern;
  const LocalDef* def = nullptr;  // set for Where / Let binders
  std::size_t id = 0;             // unique within one walk
  std::size_t group = 0;          // id of the first binder of the same where-block / let
};

class Scope {
public:
  const Binder* lookup(const std::string& name) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
  bool binds(const std::string& name) const { return lookup(name) != nullptr; }
  const std::vector<Binder>& binders() const { return stack_; }

  void push(std::string name, BinderKind kind, const LocalDef* def, std::size_t id, std::size_t group = 0) {
    stack_.push_back(Binder{std::move(name), kind, def, id, group ? group : id});
  }
  /// Stack position of the last binder of `b`'s group.
  std::size_t group_end(const Binder& b) const {
    std::size_t end = 0;
    for (std::size_t i = 0; i < stack_.size(); ++i)
      if (stack_[i].group == b.group) end = i;
    return end;
  }
  /// Stack position of the innermost binder of `name`, if any.
  std::optional<std::size_t> position(const std::string& name) const {
    for (std::size_t i = stack_.size(); i-- > 0;)
      if (stack_[i].name == name) return i;
    return std::nullopt;
  }
  void pop(std::size_t n) { stack_.resize(stack_.size() - n); }
  std::size_t size() const { return stack_.size(); }

private:
  std::vector<Binder> stack_;
};

/// Position of an expression node inside a module, with the locals in scope.
struct Site {
  const std::string* module = nullptr;
  const std::string* decl = nullptr;
  const std::vector<std::size_t>* path = nullptr;
  const Scope* scope = nullptr;
};

enum class Walk { Descend, Skip, Stop };

void pattern_vars(const Pattern& p, std::vector<std::string>& out);
std::vector<std::string> pattern_vars(const Pattern& p);

namespace detail {

template <bool Const>
class Walker {
public:
  using ExprRef = std::conditional_t<Const, const Expr&, Expr&>;
  using EquationRef = std::conditional_t<Const, const Equation&, Equation&>;
  using FunRef = std::conditional_t<Const, const FunDecl&, FunDecl&>;

  template <typename F>
  Walker(const std::string& module, F& f)
      : module_(module), callback_(const_cast<void*>(static_cast<const void*>(&f))), invoke_(&call<F>) {}

  void set_decl(const std::string& name) { decl_ = &name; }

  bool fun(FunRef f) {
    decl_ = &f.name;
    for (std::size_t i = 0; i < f.equations.size(); ++i)
      if (!equation(f.equations[i], i)) return false;
    return true;
  }

  bool equation(EquationRef eq, std::size_t index) {
    path_ = {index};
    std::size_t pushed = 0;
    for (const auto& p : eq.patterns) pushed += push_pattern(p);
    const std::size_t where_group = next_id_;
    for (const auto& d : eq.locals) {
      scope_.push(d.name, BinderKind::Where, &d, next_id_++, where_group);
      ++pushed;
    }
    path_.push_back(0);
    bool ok = expr(eq.rhs);
    path_.pop_back();
    for (std::size_t j = 0; ok && j < eq.locals.size(); ++j) {
      auto& d = eq.locals[j];
      for (const auto& p : d.params) scope_.push(p, BinderKind::Param, nullptr, next_id_++);
      path_.push_back(1 + j);
      ok = expr(d.body);
      path_.pop_back();
      scope_.pop(d.params.size());
    }
    scope_.pop(pushed);
    return ok;
  }

  bool expr(ExprRef e) {
    Site site{&module_, decl_, &path_, &scope_};
    const Walk w = invoke_(callback_, e, site);
    if (w == Walk::Stop) return false;
    if (w == Walk::Skip) return true;
    return children(e);
  }

private:
  template <typename F>
  static Walk call(void* f, ExprRef e, const Site& s) {
    return (*static_cast<F*>(f))(e, s);
  }

  std::size_t push_pattern(const Pattern& p) {
    std::vector<std::string> vars;
    pattern_vars(p, vars);
    for (auto& v : vars) scope_.push(v, BinderKind::Pattern, nullptr, next_id_++);
    return vars.size();
  }

  bool child(ExprRef e, std::size_t index) {
    path_.push_back(index);
    bool ok = expr(e);
    path_.pop_back();
    return ok;
  }

  bool children(ExprRef e) {
    if (auto* a = std::get_if<App>(&e.node)) return child(*a->fn, 0) && child(*a->arg, 1);
    if (auto* i = std::get_if<Infix>(&e.node)) return child(*i->lhs, 0) && child(*i->rhs, 1);
    if (auto* t = std::get_if<Tuple>(&e.node)) {
      for (std::size_t k = 0; k < t->items.size(); ++k)
        if (!child(t->items[k], k)) return false;
      return true;
    }
    if (auto* c = std::get_if<Case>(&e.node)) {
      if (!child(*c->scrutinee, 0)) return false;
      for (std::size_t k = 0; k < c->alts.size(); ++k) {
        const std::size_t n = push_pattern(c->alts[k].pattern);
        bool ok = child(c->alts[k].body, 1 + k);
        scope_.pop(n);
        if (!ok) return false;
      }
      return true;
    }
    if (auto* l = std::get_if<Let>(&e.node)) {
      const std::size_t let_group = next_id_;
      for (const auto& d : l->defs) scope_.push(d.name, BinderKind::Let, &d, next_id_++, let_group);
      bool ok = true;
      for (std::size_t k = 0; ok && k < l->defs.size(); ++k) {
        auto& d = l->defs[k];
        for (const auto& p : d.params) scope_.push(p, BinderKind::Param, nullptr, next_id_++);
        ok = child(d.body, k);
        scope_.pop(d.params.size());
      }
      if (ok) ok = child(*l->body, l->defs.size());
      scope_.pop(l->defs.size());
      return ok;
    }
    return true;
  }

  const std::string& module_;
  const std::string* decl_ = nullptr;
  void* callback_;
  Walk (*invoke_)(void*, ExprRef, const Site&);
  Scope scope_;
  std::vector<std::size_t> path_;
  std::size_t next_id_ = 1;
};

}  // namespace detail

/// Visits every expression of every function declaration of `m` in document
/// order. `f(Expr&, const Site&) -> Walk`.
/// Returns false when the callback stopped the walk.
template <typename F>
bool walk_module(Module& m, F&& f) {
  detail::Walker<false> w(m.name, f);
  for (auto& d : m.decls)
    if (d.is_fun() && !w.fun(d.fun())) return false;
  return true;
}

template <typename F>
bool walk_module(const Module& m, F&& f) {
  detail::Walker<true> w(m.name, f);
  for (const auto& d : m.decls)
    if (d.is_fun() && !w.fun(d.fun())) return false;
  return true;
}

template <typename F>
void walk_fun(const std::string& module, FunDecl& fun, F&& f) {
  detail::Walker<false> w(module, f);
  w.fun(fun);
}

template <typename F>
void walk_fun(const std::string& module, const FunDecl& fun, F&& f) {
  detail::Walker<true> w(module, f);
  w.fun(fun);
}

/// Visits one equation of `fun` (paths start with `index`).
template <typename F>
void walk_equation(const std::string& module, FunDecl& fun, std::size_t index, F&& f) {
  detail::Walker<false> w(module, f);
  w.set_decl(fun.name);
  w.equation(fun.equations[index], index);
}

template <typename F>
void walk_equation(const std::string& module, const FunDecl& fun, std::size_t index, F&& f) {
  detail::Walker<true> w(module, f);
  w.set_decl(fun.name);
  w.equation(fun.equations[index], index);
}

template <typename F>
void walk_project(Project& p, F&& f) {
  for (auto& [name, m] : p.modules)
    if (!walk_module(m, f)) return;
}

template <typename F>
void walk_project(const Project& p, F&& f) {
  for (const auto& [name, m] : p.modules)
    if (!walk_module(m, f)) return;
}

}  // namespace viewshift
