#include "common.hpp"

#include <algorithm>

#include "viewshift/errors.hpp"
#include "viewshift/syntax.hpp"
#include "viewshift/terms.hpp"
#include "viewshift/walk.hpp"

namespace viewshift {

const char* to_string(RefactorErrorKind kind) {
  switch (kind) {
    case RefactorErrorKind::NameClash: return "NameClash";
    case RefactorErrorKind::NotFound: return "NotFound";
    case RefactorErrorKind::NotApplicable: return "NotApplicable";
    case RefactorErrorKind::StillUsed: return "StillUsed";
    case RefactorErrorKind::PreconditionFailed: return "PreconditionFailed";
    case RefactorErrorKind::ImportCycle: return "ImportCycle";
    case RefactorErrorKind::NoSuchApplication: return "NoSuchApplication";
  }
  return "?";
}

namespace refactor_detail {

void fail(RefactorErrorKind kind, const std::string& op, const std::string& message) {
  throw RefactorError(kind, op + ": " + message);
}

Project transform(const Project& input, const std::string& op, const std::function<void(Project&)>& body) {
  Project pinned;
  try {
    resolve_project(input);
    pinned = pin(input);
  } catch (const ResolveError& e) {
    fail(RefactorErrorKind::PreconditionFailed, op, std::string("input project does not resolve: ") + e.what());
  }
  body(pinned);
  Project out;
  try {
    out = unpin(std::move(pinned));
  } catch (const ResolveError& e) {
    fail(RefactorErrorKind::PreconditionFailed, op, std::string("result does not resolve: ") + e.what());
  }
  if (auto cycle = find_import_cycle(out)) {
    std::string text;
    for (const auto& m : *cycle) text += (text.empty() ? "" : " -> ") + m;
    fail(RefactorErrorKind::ImportCycle, op, "the change would create the import cycle " + text);
  }
  try {
    resolve_project(out);
  } catch (const ResolveError& e) {
    fail(RefactorErrorKind::PreconditionFailed, op, std::string("result does not resolve: ") + e.what());
  }
  return out;
}

Module& module_of(Project& p, const std::string& module, const std::string& op) {
  Module* m = p.find(module);
  if (!m) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  return *m;
}

FunDecl& fun_of(Module& m, const std::string& f, const std::string& op) {
  FunDecl* d = m.find_fun(f);
  if (!d) fail(RefactorErrorKind::NotFound, op, "no top-level definition " + f + " in module " + m.name);
  return *d;
}

std::size_t decl_index(const Module& m, const std::string& f, const std::string& op) {
  auto i = m.index_of(f);
  if (!i) fail(RefactorErrorKind::NotFound, op, "no top-level definition " + f + " in module " + m.name);
  return *i;
}

Var resolve_global(const Project& p, const std::string& module, const std::string& name, const std::string& op) {
  if (!p.find(module)) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  Var v;
  if (const auto dot = name.rfind('.'); dot != std::string::npos) {
    v.qualifier = name.substr(0, dot);
    v.name = name.substr(dot + 1);
  } else {
    v.name = name;
  }
  try {
    return pin_expr(p, module, v).as<Var>();
  } catch (const ResolveError& e) {
    fail(RefactorErrorKind::NotFound, op, name + " does not resolve in module " + module + " (" + e.what() + ")");
  }
}

namespace {

void add_expr_names(const Expr& e, std::set<std::string>& out) {
  auto names = all_local_names(e);
  out.insert(names.begin(), names.end());
  for (const auto& fv : free_vars(e))
    if (auto dot = fv.rfind('.'); dot != std::string::npos) out.insert(fv.substr(dot + 1));
}

}  // namespace

std::set<std::string> names_in(const Equation& eq) {
  std::set<std::string> out;
  for (const auto& p : eq.patterns)
    for (auto& v : pattern_vars(p)) out.insert(v);
  add_expr_names(eq.rhs, out);
  for (const auto& d : eq.locals) {
    out.insert(d.name);
    out.insert(d.params.begin(), d.params.end());
    add_expr_names(d.body, out);
  }
  return out;
}

std::set<std::string> names_in(const FunDecl& f) {
  std::set<std::string> out{f.name};
  for (const auto& eq : f.equations) {
    auto n = names_in(eq);
    out.insert(n.begin(), n.end());
  }
  return out;
}

std::optional<std::size_t> equation_for_constructor(const FunDecl& f, const std::string& constructor) {
  for (std::size_t i = 0; i < f.equations.size(); ++i) {
    for (const auto& p : f.equations[i].patterns) {
      const auto* c = p.try_as<PCon>();
      if (!c) continue;
      if (c->name == constructor || c->qualifier + "." + c->name == constructor) return i;
      break;
    }
  }
  return std::nullopt;
}

Expr* child_of(Expr& e, std::size_t i) {
  if (auto* a = e.try_as<App>()) return i == 0 ? a->fn.get() : i == 1 ? a->arg.get() : nullptr;
  if (auto* x = e.try_as<Infix>()) return i == 0 ? x->lhs.get() : i == 1 ? x->rhs.get() : nullptr;
  if (auto* t = e.try_as<Tuple>()) return i < t->items.size() ? &t->items[i] : nullptr;
  if (auto* c = e.try_as<Case>()) {
    if (i == 0) return c->scrutinee.get();
    return i - 1 < c->alts.size() ? &c->alts[i - 1].body : nullptr;
  }
  if (auto* l = e.try_as<Let>()) {
    if (i < l->defs.size()) return &l->defs[i].body;
    return i == l->defs.size() ? l->body.get() : nullptr;
  }
  return nullptr;
}

std::vector<Expr*> nodes_on_path(FunDecl& f, const std::vector<std::size_t>& path) {
  std::vector<Expr*> out;
  auto& eq = f.equations.at(path.at(0));
  Expr* cur = path.at(1) == 0 ? &eq.rhs : &eq.locals.at(path[1] - 1).body;
  out.push_back(cur);
  for (std::size_t k = 2; k < path.size(); ++k) {
    cur = child_of(*cur, path[k]);
    if (!cur) throw std::logic_error("stale occurrence path");
    out.push_back(cur);
  }
  return out;
}

void retarget(Project& pinned, const Var& from, const Var& to) {
  walk_project(pinned, [&](Expr& e, const Site&) {
    if (auto* v = e.try_as<Var>(); v && *v == from) *v = to;
    return Walk::Descend;
  });
}

std::optional<OccRef> first_reference(const Project& pinned, const Var& target, const std::string& except_module,
                                      const std::string& except_decl) {
  std::optional<OccRef> found;
  walk_project(pinned, [&](const Expr& e, const Site& s) {
    if (*s.module == except_module && *s.decl == except_decl) return Walk::Skip;
    if (const auto* v = e.try_as<Var>(); v && *v == target) {
      found = OccRef{*s.module, *s.decl, *s.path};
      return Walk::Stop;
    }
    return Walk::Descend;
  });
  return found;
}

void prune_export(Module& m, const std::string& name) {
  if (!m.exports) return;
  auto& ex = *m.exports;
  ex.erase(std::remove(ex.begin(), ex.end(), name), ex.end());
}

std::string describe(const OccRef& ref) { return "in " + ref.module + "." + ref.decl; }

Expr with_locals(const Equation& eq) {
  if (eq.locals.empty()) return eq.rhs;
  return Let{eq.locals, eq.rhs};
}

Expr unfold_call(const FunDecl& d, const std::vector<Expr>& args, const std::string& op) {
  const std::size_t n = d.arity();
  if (args.size() < n)
    fail(RefactorErrorKind::NotApplicable, op,
         d.name + " takes " + std::to_string(n) + " arguments but is applied to " + std::to_string(args.size()));
  std::vector<Expr> rest(args.begin() + static_cast<std::ptrdiff_t>(n), args.end());
  const bool simple = d.equations.size() == 1 &&
                      std::all_of(d.equations[0].patterns.begin(), d.equations[0].patterns.end(),
                                  [](const Pattern& p) { return p.is<PVar>(); });
  if (simple) {
    const auto& eq = d.equations[0];
    std::map<std::string, Expr> subst;
    for (std::size_t i = 0; i < n; ++i) subst[eq.patterns[i].as<PVar>().name] = args[i];
    return apply(substitute(with_locals(eq), subst), std::move(rest));
  }
  Case c;
  if (n == 1) {
    c.scrutinee = args[0];
  } else {
    Tuple t;
    t.items.assign(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(n));
    c.scrutinee = Expr(std::move(t));
  }
  for (const auto& eq : d.equations) {
    Pattern p = n == 1 ? eq.patterns[0] : Pattern(PTuple{eq.patterns});
    c.alts.push_back(Alt{std::move(p), with_locals(eq)});
  }
  return apply(Expr(std::move(c)), std::move(rest));
}

// ---------------------------------------------------------------------------
// Folding

namespace {

using Aliases = std::map<std::string, Expr>;

class Matcher {
public:
  explicit Matcher(const FoldPattern& pattern) : pattern_(pattern), metas_(pattern.params.begin(), pattern.params.end()) {}

  std::optional<std::vector<Expr>> run(const Expr& e, const Aliases& aliases) {
    bound_.clear();
    pairs_.clear();
    aliases_ = &aliases;
    if (!match(pattern_.body, e)) return std::nullopt;
    std::vector<Expr> args;
    for (const auto& p : pattern_.params) {
      auto it = bound_.find(p);
      if (it == bound_.end()) return std::nullopt;  // a parameter the body never uses
      args.push_back(it->second);
    }
    return args;
  }

private:
  std::optional<std::string> pattern_side(const std::string& n) const {
    for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }
  bool expr_bound_inside(const std::string& n) const {
    return std::any_of(pairs_.begin(), pairs_.end(), [&](const auto& pr) { return pr.second == n; });
  }

  bool match_pattern(const Pattern& p, const Pattern& e, std::size_t& pushed) {
    if (p.node.index() != e.node.index()) return false;
    if (const auto* v = p.try_as<PVar>()) {
      pairs_.emplace_back(v->name, e.as<PVar>().name);
      ++pushed;
      return true;
    }
    if (const auto* c = p.try_as<PCon>()) {
      const auto& ec = e.as<PCon>();
      if (c->name != ec.name || c->qualifier != ec.qualifier || c->args.size() != ec.args.size()) return false;
      for (std::size_t k = 0; k < c->args.size(); ++k)
        if (!match_pattern(c->args[k], ec.args[k], pushed)) return false;
      return true;
    }
    if (const auto* t = p.try_as<PTuple>()) {
      const auto& et = e.as<PTuple>();
      if (t->items.size() != et.items.size()) return false;
      for (std::size_t k = 0; k < t->items.size(); ++k)
        if (!match_pattern(t->items[k], et.items[k], pushed)) return false;
      return true;
    }
    return p == e;
  }

  void unbind(std::size_t n) { pairs_.resize(pairs_.size() - n); }

  bool match(const Expr& p, const Expr& e) {
    if (const auto* pv = p.try_as<Var>(); pv && pv->qualifier.empty()) {
      if (auto other = pattern_side(pv->name)) {
        const auto* ev = e.try_as<Var>();
        return ev && ev->qualifier.empty() && ev->name == *other;
      }
      if (metas_.count(pv->name)) {
        for (const auto& fv : free_locals(e))
          if (expr_bound_inside(fv)) return false;
        auto it = bound_.find(pv->name);
        if (it != bound_.end()) return alpha_eq(it->second, e);
        bound_.emplace(pv->name, e);
        return true;
      }
      const auto* ev = e.try_as<Var>();
      return ev && ev->qualifier.empty() && ev->name == pv->name && !expr_bound_inside(ev->name);
    }
    if (const auto* ev = e.try_as<Var>(); ev && ev->qualifier.empty() && !expr_bound_inside(ev->name)) {
      if (auto it = aliases_->find(ev->name); it != aliases_->end()) return match(p, it->second);
    }
    if (p.node.index() != e.node.index()) return false;
    if (p.is<Var>() || p.is<Con>() || p.is<IntLit>() || p.is<StrLit>() || p.is<Builtin>()) return p == e;
    if (const auto* a = p.try_as<App>()) {
      const auto& b = e.as<App>();
      return match(*a->fn, *b.fn) && match(*a->arg, *b.arg);
    }
    if (const auto* a = p.try_as<Infix>()) {
      const auto& b = e.as<Infix>();
      return a->op == b.op && match(*a->lhs, *b.lhs) && match(*a->rhs, *b.rhs);
    }
    if (const auto* a = p.try_as<Tuple>()) {
      const auto& b = e.as<Tuple>();
      if (a->items.size() != b.items.size()) return false;
      for (std::size_t k = 0; k < a->items.size(); ++k)
        if (!match(a->items[k], b.items[k])) return false;
      return true;
    }
    if (const auto* a = p.try_as<Case>()) {
      const auto& b = e.as<Case>();
      if (a->alts.size() != b.alts.size() || !match(*a->scrutinee, *b.scrutinee)) return false;
      for (std::size_t k = 0; k < a->alts.size(); ++k) {
        std::size_t pushed = 0;
        const bool ok = match_pattern(a->alts[k].pattern, b.alts[k].pattern, pushed) &&
                        match(a->alts[k].body, b.alts[k].body);
        unbind(pushed);
        if (!ok) return false;
      }
      return true;
    }
    const auto& a = p.as<Let>();
    const auto& b = e.as<Let>();
    if (a.defs.size() != b.defs.size()) return false;
    for (std::size_t k = 0; k < a.defs.size(); ++k) pairs_.emplace_back(a.defs[k].name, b.defs[k].name);
    bool ok = true;
    for (std::size_t k = 0; ok && k < a.defs.size(); ++k) {
      if (a.defs[k].params.size() != b.defs[k].params.size()) {
        ok = false;
        break;
      }
      for (std::size_t q = 0; q < a.defs[k].params.size(); ++q)
        pairs_.emplace_back(a.defs[k].params[q], b.defs[k].params[q]);
      ok = match(a.defs[k].body, b.defs[k].body);
      unbind(a.defs[k].params.size());
    }
    ok = ok && match(*a.body, *b.body);
    unbind(a.defs.size());
    return ok;
  }

  const FoldPattern& pattern_;
  std::set<std::string> metas_;
  std::map<std::string, Expr> bound_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  const Aliases* aliases_ = nullptr;
};

Aliases without(Aliases a, const std::vector<std::string>& names) {
  for (const auto& n : names) a.erase(n);
  return a;
}

std::size_t fold_rec(Expr& e, const FoldPattern& pattern, Matcher& matcher, const Aliases& aliases, bool use_aliases) {
  if (auto args = matcher.run(e, aliases)) {
    e = apply(Expr(pattern.head), std::move(*args));
    std::size_t count = 1;
    std::vector<Expr*> arg_nodes;
    for (Expr* cur = &e; auto* a = cur->try_as<App>(); cur = a->fn.get()) arg_nodes.push_back(a->arg.get());
    for (Expr* a : arg_nodes) count += fold_rec(*a, pattern, matcher, aliases, use_aliases);
    return count;
  }
  std::size_t count = 0;
  if (auto* c = e.try_as<Case>()) {
    count += fold_rec(*c->scrutinee, pattern, matcher, aliases, use_aliases);
    for (auto& alt : c->alts) {
      Aliases inner = without(aliases, pattern_vars(alt.pattern));
      const auto* tuple = c->scrutinee->try_as<Tuple>();
      const auto* ptuple = alt.pattern.try_as<PTuple>();
      if (use_aliases && tuple && ptuple && tuple->items.size() == ptuple->items.size()) {
        for (std::size_t k = 0; k < tuple->items.size(); ++k)
          if (const auto* v = ptuple->items[k].try_as<PVar>(); v && free_locals(tuple->items[k]).empty())
            inner[v->name] = tuple->items[k];
      }
      count += fold_rec(alt.body, pattern, matcher, inner, use_aliases);
    }
    return count;
  }
  if (auto* l = e.try_as<Let>()) {
    std::vector<std::string> names;
    for (const auto& d : l->defs) names.push_back(d.name);
    Aliases inner = without(aliases, names);
    if (use_aliases)
      for (const auto& d : l->defs)
        if (d.params.empty() && free_locals(d.body).empty()) inner[d.name] = d.body;
    for (auto& d : l->defs) count += fold_rec(d.body, pattern, matcher, without(inner, d.params), use_aliases);
    count += fold_rec(*l->body, pattern, matcher, inner, use_aliases);
    return count;
  }
  for (std::size_t i = 0;; ++i) {
    Expr* child = child_of(e, i);
    if (!child) break;
    count += fold_rec(*child, pattern, matcher, aliases, use_aliases);
  }
  return count;
}

}  // namespace

std::size_t fold_instances(Expr& e, const FoldPattern& pattern, bool use_aliases) {
  Matcher matcher(pattern);
  return fold_rec(e, pattern, matcher, {}, use_aliases);
}

}  // namespace refactor_detail
}  // namespace viewshift
