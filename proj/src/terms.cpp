#include "viewshift/terms.hpp"

#include <algorithm>
#include <optional>

#include "viewshift/walk.hpp"

namespace viewshift {

void pattern_vars(const Pattern& p, std::vector<std::string>& out) {
  if (const auto* v = p.try_as<PVar>()) out.push_back(v->name);
  if (const auto* c = p.try_as<PCon>())
    for (const auto& a : c->args) pattern_vars(a, out);
  if (const auto* t = p.try_as<PTuple>())
    for (const auto& a : t->items) pattern_vars(a, out);
}

std::vector<std::string> pattern_vars(const Pattern& p) {
  std::vector<std::string> out;
  pattern_vars(p, out);
  return out;
}

namespace {

void collect_free(const Expr& e, std::set<std::string>& out, bool include_qualified) {
  FunDecl holder{"", {Equation{{}, e, {}}}};
  walk_fun("", holder, [&](const Expr& x, const Site& s) {
    if (const auto* v = x.try_as<Var>()) {
      if (!v->qualifier.empty()) {
        if (include_qualified) out.insert(v->qualifier + "." + v->name);
      } else if (!s.scope->binds(v->name)) {
        out.insert(v->name);
      }
    }
    return Walk::Descend;
  });
}

void rename_pattern(Pattern& p, const std::map<std::string, std::string>& ren) {
  if (auto* v = p.try_as<PVar>()) {
    if (auto it = ren.find(v->name); it != ren.end()) v->name = it->second;
  }
  if (auto* c = p.try_as<PCon>())
    for (auto& a : c->args) rename_pattern(a, ren);
  if (auto* t = p.try_as<PTuple>())
    for (auto& a : t->items) rename_pattern(a, ren);
}

std::set<std::string> free_of_subst(const std::map<std::string, Expr>& subst) {
  std::set<std::string> fv;
  for (const auto& [k, r] : subst) {
    auto f = free_locals(r);
    fv.insert(f.begin(), f.end());
  }
  return fv;
}

Expr subst_rec(const Expr& e, std::map<std::string, Expr> subst);

// Renames binders of a scope that would capture free variables of the
// replacements, and drops substitutions for names the scope rebinds.
// Returns the renaming to apply to the scope's bodies.
std::map<std::string, std::string> prepare_scope(const std::vector<std::string>& binders,
                                                 std::map<std::string, Expr>& subst,
                                                 const std::set<std::string>& body_names) {
  for (const auto& b : binders) subst.erase(b);
  std::map<std::string, std::string> renaming;
  if (subst.empty()) return renaming;
  const auto fv = free_of_subst(subst);
  std::set<std::string> avoid = fv;
  avoid.insert(body_names.begin(), body_names.end());
  avoid.insert(binders.begin(), binders.end());
  for (const auto& [k, r] : subst) avoid.insert(k);
  for (const auto& b : binders) {
    if (!fv.count(b)) continue;
    std::string fresh = fresh_prime(b, avoid);
    avoid.insert(fresh);
    renaming[b] = fresh;
  }
  return renaming;
}

std::map<std::string, Expr> with_renaming(std::map<std::string, Expr> subst,
                                          const std::map<std::string, std::string>& renaming) {
  for (const auto& [from, to] : renaming) subst[from] = var(to);
  return subst;
}

Expr subst_rec(const Expr& e, std::map<std::string, Expr> subst) {
  if (subst.empty()) return e;
  struct Visitor {
    std::map<std::string, Expr>& subst;
    Expr operator()(const Var& v) const {
      if (v.qualifier.empty())
        if (auto it = subst.find(v.name); it != subst.end()) return it->second;
      return v;
    }
    Expr operator()(const Con& c) const { return c; }
    Expr operator()(const IntLit& i) const { return i; }
    Expr operator()(const StrLit& s) const { return s; }
    Expr operator()(const Builtin& b) const { return b; }
    Expr operator()(const App& a) const { return app(subst_rec(*a.fn, subst), subst_rec(*a.arg, subst)); }
    Expr operator()(const Infix& i) const {
      return infix(i.op, subst_rec(*i.lhs, subst), subst_rec(*i.rhs, subst));
    }
    Expr operator()(const Tuple& t) const {
      Tuple out;
      for (const auto& x : t.items) out.items.push_back(subst_rec(x, subst));
      return out;
    }
    Expr operator()(const Case& c) const {
      Case out;
      out.scrutinee = subst_rec(*c.scrutinee, subst);
      for (const auto& alt : c.alts) {
        auto local = subst;
        const auto binders = pattern_vars(alt.pattern);
        const auto renaming = prepare_scope(binders, local, all_local_names(alt.body));
        Alt a = alt;
        rename_pattern(a.pattern, renaming);
        a.body = subst_rec(alt.body, with_renaming(local, renaming));
        out.alts.push_back(std::move(a));
      }
      return out;
    }
    Expr operator()(const Let& l) const {
      std::vector<std::string> names;
      std::set<std::string> body_names = all_local_names(*l.body);
      for (const auto& d : l.defs) {
        names.push_back(d.name);
        auto n = all_local_names(d.body);
        body_names.insert(n.begin(), n.end());
        body_names.insert(d.params.begin(), d.params.end());
      }
      auto local = subst;
      const auto renaming = prepare_scope(names, local, body_names);
      const auto inner = with_renaming(local, renaming);
      Let out;
      for (const auto& d : l.defs) {
        LocalDef nd = d;
        if (auto it = renaming.find(d.name); it != renaming.end()) nd.name = it->second;
        auto def_subst = inner;
        const auto param_ren = prepare_scope(d.params, def_subst, all_local_names(d.body));
        for (auto& p : nd.params)
          if (auto it = param_ren.find(p); it != param_ren.end()) p = it->second;
        nd.body = subst_rec(d.body, with_renaming(def_subst, param_ren));
        out.defs.push_back(std::move(nd));
      }
      out.body = subst_rec(*l.body, inner);
      return out;
    }
  };
  return std::visit(Visitor{subst}, e.node);
}

// ---------------------------------------------------------------------------
// alpha-equivalence

class AlphaEnv {
public:
  explicit AlphaEnv(const GlobalRenaming& globals) : globals_(globals) {}

  void bind(const std::string& a, const std::string& b) {
    left_.push_back(a);
    right_.push_back(b);
  }
  void unbind(std::size_t n) {
    left_.resize(left_.size() - n);
    right_.resize(right_.size() - n);
  }

  bool same_var(const Var& a, const Var& b) const {
    if (!a.qualifier.empty() || !b.qualifier.empty()) {
      if (a.qualifier.empty() || b.qualifier.empty()) return false;
      auto it = globals_.find({a.qualifier, a.name});
      if (it != globals_.end()) return it->second == std::pair{b.qualifier, b.name};
      return a == b;
    }
    const auto ia = index_of(left_, a.name);
    const auto ib = index_of(right_, b.name);
    if (!ia && !ib) return a.name == b.name;
    return ia && ib && *ia == *ib;
  }

private:
  static std::optional<std::size_t> index_of(const std::vector<std::string>& v, const std::string& n) {
    for (std::size_t i = v.size(); i-- > 0;)
      if (v[i] == n) return i;
    return std::nullopt;
  }

  const GlobalRenaming& globals_;
  std::vector<std::string> left_;
  std::vector<std::string> right_;
};

// Compares pattern shapes and binds their variables pairwise.
bool alpha_pattern(const Pattern& a, const Pattern& b, AlphaEnv& env, std::size_t& bound) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* va = a.try_as<PVar>()) {
    env.bind(va->name, b.as<PVar>().name);
    ++bound;
    return true;
  }
  if (const auto* ia = a.try_as<PInt>()) return ia->value == b.as<PInt>().value;
  if (a.is<PWild>()) return true;
  if (const auto* ca = a.try_as<PCon>()) {
    const auto& cb = b.as<PCon>();
    if (ca->name != cb.name || ca->qualifier != cb.qualifier || ca->args.size() != cb.args.size()) return false;
    for (std::size_t k = 0; k < ca->args.size(); ++k)
      if (!alpha_pattern(ca->args[k], cb.args[k], env, bound)) return false;
    return true;
  }
  const auto& ta = a.as<PTuple>();
  const auto& tb = b.as<PTuple>();
  if (ta.items.size() != tb.items.size()) return false;
  for (std::size_t k = 0; k < ta.items.size(); ++k)
    if (!alpha_pattern(ta.items[k], tb.items[k], env, bound)) return false;
  return true;
}

bool alpha_expr(const Expr& a, const Expr& b, AlphaEnv& env);

bool alpha_locals(const std::vector<LocalDef>& a, const std::vector<LocalDef>& b, AlphaEnv& env) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].params.size() != b[k].params.size()) return false;
    for (std::size_t p = 0; p < a[k].params.size(); ++p) env.bind(a[k].params[p], b[k].params[p]);
    const bool ok = alpha_expr(a[k].body, b[k].body, env);
    env.unbind(a[k].params.size());
    if (!ok) return false;
  }
  return true;
}

bool alpha_expr(const Expr& a, const Expr& b, AlphaEnv& env) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* va = a.try_as<Var>()) return env.same_var(*va, b.as<Var>());
  if (const auto* ca = a.try_as<Con>()) return *ca == b.as<Con>();
  if (a.is<IntLit>() || a.is<StrLit>() || a.is<Builtin>()) return a == b;
  if (const auto* pa = a.try_as<App>()) {
    const auto& pb = b.as<App>();
    return alpha_expr(*pa->fn, *pb.fn, env) && alpha_expr(*pa->arg, *pb.arg, env);
  }
  if (const auto* ia = a.try_as<Infix>()) {
    const auto& ib = b.as<Infix>();
    return ia->op == ib.op && alpha_expr(*ia->lhs, *ib.lhs, env) && alpha_expr(*ia->rhs, *ib.rhs, env);
  }
  if (const auto* ta = a.try_as<Tuple>()) {
    const auto& tb = b.as<Tuple>();
    if (ta->items.size() != tb.items.size()) return false;
    for (std::size_t k = 0; k < ta->items.size(); ++k)
      if (!alpha_expr(ta->items[k], tb.items[k], env)) return false;
    return true;
  }
  if (const auto* ca = a.try_as<Case>()) {
    const auto& cb = b.as<Case>();
    if (ca->alts.size() != cb.alts.size() || !alpha_expr(*ca->scrutinee, *cb.scrutinee, env)) return false;
    for (std::size_t k = 0; k < ca->alts.size(); ++k) {
      std::size_t bound = 0;
      bool ok = alpha_pattern(ca->alts[k].pattern, cb.alts[k].pattern, env, bound) &&
                alpha_expr(ca->alts[k].body, cb.alts[k].body, env);
      env.unbind(bound);
      if (!ok) return false;
    }
    return true;
  }
  const auto& la = a.as<Let>();
  const auto& lb = b.as<Let>();
  if (la.defs.size() != lb.defs.size()) return false;
  for (std::size_t k = 0; k < la.defs.size(); ++k) env.bind(la.defs[k].name, lb.defs[k].name);
  const bool ok = alpha_locals(la.defs, lb.defs, env) && alpha_expr(*la.body, *lb.body, env);
  env.unbind(la.defs.size());
  return ok;
}

bool alpha_equation(const Equation& a, const Equation& b, AlphaEnv& env) {
  if (a.patterns.size() != b.patterns.size() || a.locals.size() != b.locals.size()) return false;
  std::size_t bound = 0;
  bool ok = true;
  for (std::size_t k = 0; ok && k < a.patterns.size(); ++k) ok = alpha_pattern(a.patterns[k], b.patterns[k], env, bound);
  if (ok) {
    for (std::size_t k = 0; k < a.locals.size(); ++k) env.bind(a.locals[k].name, b.locals[k].name);
    bound += a.locals.size();
    ok = alpha_expr(a.rhs, b.rhs, env) && alpha_locals(a.locals, b.locals, env);
  }
  env.unbind(bound);
  return ok;
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_free(e, out, true);
  return out;
}

std::set<std::string> free_locals(const Expr& e) {
  std::set<std::string> out;
  collect_free(e, out, false);
  return out;
}

std::set<std::string> all_local_names(const Expr& e) {
  std::set<std::string> out;
  FunDecl holder{"", {Equation{{}, e, {}}}};
  walk_fun("", holder, [&](const Expr& x, const Site&) {
    if (const auto* v = x.try_as<Var>(); v && v->qualifier.empty()) out.insert(v->name);
    if (const auto* c = x.try_as<Case>())
      for (const auto& alt : c->alts)
        for (auto& n : pattern_vars(alt.pattern)) out.insert(n);
    if (const auto* l = x.try_as<Let>())
      for (const auto& d : l->defs) {
        out.insert(d.name);
        out.insert(d.params.begin(), d.params.end());
      }
    return Walk::Descend;
  });
  return out;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  return subst_rec(e, {{name, replacement}});
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst) { return subst_rec(e, subst); }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base + "_gen";
  if (!avoid.count(candidate)) return candidate;
  for (int i = 1;; ++i) {
    candidate = base + "_gen_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

std::string fresh_prime(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base + "'";
  while (avoid.count(candidate)) candidate += "'";
  return candidate;
}

bool alpha_eq(const Expr& a, const Expr& b) { return alpha_eq(a, b, {}); }

bool alpha_eq(const Expr& a, const Expr& b, const GlobalRenaming& globals) {
  AlphaEnv env(globals);
  return alpha_expr(a, b, env);
}

bool alpha_eq(const FunDecl& a, const FunDecl& b, const GlobalRenaming& globals) {
  if (a.equations.size() != b.equations.size()) return false;
  AlphaEnv env(globals);
  env.bind(a.name, b.name);
  for (std::size_t k = 0; k < a.equations.size(); ++k)
    if (!alpha_equation(a.equations[k], b.equations[k], env)) return false;
  return true;
}

bool alpha_eq(const TopDecl& a, const TopDecl& b) {
  if (a.is_fun() != b.is_fun()) return false;
  if (a.is_data()) return a.data() == b.data();
  return alpha_eq(a.fun(), b.fun());
}

}  // namespace viewshift
