#include "generators.hpp"

#include <algorithm>
#include <map>

namespace viewshift::testing {

namespace {

const std::vector<std::string> kFreePool = {"a", "b", "x", "y"};
const std::vector<std::string> kGlobals = {"M.f", "N.g", "Expr.fold1"};
const std::vector<std::string> kCons = {"Const", "Add", "Leaf", "Nil"};

Expr leaf(Gen& g, const std::vector<std::string>& locals) {
  switch (g.range(0, 5)) {
    case 0: return int_lit(g.range(0, 99));
    case 1: return str_lit(g.pick(std::vector<std::string>{"", "+", "ab", "x y"}));
    case 2: {
      const std::string& q = g.pick(kGlobals);
      const auto dot = q.find('.');
      return var(q.substr(dot + 1), q.substr(0, dot));
    }
    case 3: return con(g.pick(kCons));
    default:
      if (!locals.empty() && g.chance(80)) return var(g.pick(locals));
      return var(g.pick(kFreePool));
  }
}

std::string binder(Gen& g, std::vector<std::string>& taken) {
  std::string n;
  do {
    n = g.pick(std::vector<std::string>{"a", "b", "c", "x", "y", "z", "v", "w"});
    if (g.chance(30)) n += std::to_string(g.range(1, 3));
  } while (std::find(taken.begin(), taken.end(), n) != taken.end());
  taken.push_back(n);
  return n;
}

}  // namespace

Pattern random_pattern(Gen& g, int depth, std::vector<std::string>& bound) {
  const int pick = depth <= 0 ? g.range(0, 2) : g.range(0, 4);
  switch (pick) {
    case 0: return PVar{binder(g, bound)};
    case 1: return PInt{g.range(0, 9)};
    case 2: return PWild{};
    case 3: {
      PCon c{"", g.pick(kCons), {}};
      const int n = g.range(0, 2);
      for (int i = 0; i < n; ++i) c.args.push_back(random_pattern(g, depth - 1, bound));
      return c;
    }
    default: {
      PTuple t;
      const int n = g.range(2, 3);
      for (int i = 0; i < n; ++i) t.items.push_back(random_pattern(g, depth - 1, bound));
      return t;
    }
  }
}

Expr random_expr(Gen& g, int depth, std::vector<std::string> locals) {
  if (depth <= 0) return leaf(g, locals);
  switch (g.range(0, 9)) {
    case 0:
    case 1: return app(random_expr(g, depth - 1, locals), random_expr(g, depth - 1, locals));
    case 2:
      return infix(g.pick(std::vector<InfixOp>{InfixOp::Add, InfixOp::Mul, InfixOp::Concat}),
                   random_expr(g, depth - 1, locals), random_expr(g, depth - 1, locals));
    case 3: {
      Tuple t;
      const int n = g.range(2, 3);
      for (int i = 0; i < n; ++i) t.items.push_back(random_expr(g, depth - 1, locals));
      return t;
    }
    case 4: {
      Case c;
      c.scrutinee = random_expr(g, depth - 1, locals);
      const int n = g.range(1, 3);
      for (int i = 0; i < n; ++i) {
        std::vector<std::string> bound;
        Pattern p = random_pattern(g, 2, bound);
        auto inner = locals;
        inner.insert(inner.end(), bound.begin(), bound.end());
        c.alts.push_back(Alt{std::move(p), random_expr(g, depth - 1, inner)});
      }
      return c;
    }
    case 5: {
      Let l;
      std::vector<std::string> names;
      const int n = g.range(1, 2);
      for (int i = 0; i < n; ++i) binder(g, names);
      auto inner = locals;
      inner.insert(inner.end(), names.begin(), names.end());
      for (const auto& name : names) {
        std::vector<std::string> params;
        auto taken = names;
        const int k = g.range(0, 2);
        for (int j = 0; j < k; ++j) params.push_back(binder(g, taken));
        auto body_scope = inner;
        body_scope.insert(body_scope.end(), params.begin(), params.end());
        l.defs.push_back(LocalDef{name, params, random_expr(g, depth - 1, body_scope)});
      }
      l.body = random_expr(g, depth - 1, inner);
      return l;
    }
    case 6: return app(Builtin{g.chance(50) ? BuiltinFn::Show : BuiltinFn::Print}, random_expr(g, depth - 1, locals));
    default: return leaf(g, locals);
  }
}

Expr random_int_expr(Gen& g, int depth, std::vector<std::string> ints) {
  if (depth <= 0 || g.chance(15)) {
    if (!ints.empty() && g.chance(60)) return var(g.pick(ints));
    return int_lit(g.range(0, 9));
  }
  switch (g.range(0, 6)) {
    case 0:
    case 1:
      return infix(g.chance(60) ? InfixOp::Add : InfixOp::Mul, random_int_expr(g, depth - 1, ints),
                   random_int_expr(g, depth - 1, ints));
    case 2: {
      // let with a value binding, possibly unused or used twice
      std::vector<std::string> taken = ints;
      const std::string n = binder(g, taken);
      Expr bound = random_int_expr(g, depth - 1, ints);
      auto inner = ints;
      inner.push_back(n);
      return Let{{LocalDef{n, {}, std::move(bound)}}, random_int_expr(g, depth - 1, inner)};
    }
    case 3: {
      // non-recursive local function applied to an argument
      std::vector<std::string> taken = ints;
      const std::string fn = binder(g, taken);
      const std::string param = binder(g, taken);
      auto body_scope = ints;
      body_scope.push_back(param);
      LocalDef d{fn, {param}, random_int_expr(g, depth - 1, body_scope)};
      return Let{{std::move(d)}, app(var(fn), random_int_expr(g, depth - 1, ints))};
    }
    case 4: {
      // case over a pair, binding both components
      std::vector<std::string> taken = ints;
      const std::string p = binder(g, taken);
      const std::string q = binder(g, taken);
      Case c;
      c.scrutinee = Expr(Tuple{{random_int_expr(g, depth - 1, ints), random_int_expr(g, depth - 1, ints)}});
      auto inner = ints;
      inner.push_back(p);
      inner.push_back(q);
      c.alts.push_back(Alt{PTuple{{pvar(p), pvar(q)}}, random_int_expr(g, depth - 1, inner)});
      return c;
    }
    default: {
      // case on an int literal with a default branch
      Case c;
      c.scrutinee = random_int_expr(g, depth - 1, ints);
      c.alts.push_back(Alt{PInt{g.range(0, 3)}, random_int_expr(g, depth - 1, ints)});
      c.alts.push_back(Alt{PWild{}, random_int_expr(g, depth - 1, ints)});
      return c;
    }
  }
}

Module random_module(Gen& g, const std::string& name) {
  Module m;
  m.name = name;
  const int imports = g.range(0, 2);
  for (int i = 0; i < imports; ++i) {
    std::string imp = g.pick(std::vector<std::string>{"Expr", "Util", "Other"});
    if (std::find(m.imports.begin(), m.imports.end(), imp) == m.imports.end()) m.imports.push_back(imp);
  }
  if (g.chance(50)) {
    DataDecl d{"T" + std::to_string(g.range(0, 9)), {}};
    d.constructors.push_back(ConstructorDef{"Leaf", {TypeExpr{"Int", {}}}});
    d.constructors.push_back(ConstructorDef{"Node", {TypeExpr{"", {TypeExpr{d.name, {}}, TypeExpr{d.name, {}}}}}});
    if (g.chance(50)) d.constructors.push_back(ConstructorDef{"Nil", {}});
    m.decls.push_back(TopDecl{std::move(d), {}});
  }
  const int funs = g.range(1, 3);
  for (int i = 0; i < funs; ++i) {
    FunDecl f{"f" + std::to_string(i), {}};
    const int arity = g.range(0, 2);
    const int equations = arity == 0 ? 1 : g.range(1, 2);
    for (int e = 0; e < equations; ++e) {
      Equation eq;
      std::vector<std::string> bound;
      for (int k = 0; k < arity; ++k) eq.patterns.push_back(random_pattern(g, 1, bound));
      if (g.chance(40)) {
        std::vector<std::string> taken = bound;
        const std::string local = binder(g, taken);
        bound.push_back(local);
        eq.locals.push_back(LocalDef{local, {}, random_expr(g, 2, bound)});
      }
      eq.rhs = random_expr(g, 3, bound);
      f.equations.push_back(std::move(eq));
    }
    std::vector<std::string> comment;
    if (g.chance(30)) comment = {"helper " + std::to_string(i), "second line"};
    m.decls.push_back(TopDecl{std::move(f), std::move(comment)});
  }
  if (g.chance(40)) {
    m.exports = std::vector<std::string>{};
    for (const auto& d : m.decls)
      if (g.chance(60)) m.exports->push_back(d.name());
  }
  return m;
}

namespace {

class Renamer {
public:
  explicit Renamer(Gen& g) : g_(g) {}

  Expr expr(const Expr& e, const std::map<std::string, std::string>& env) {
    if (const auto* v = e.try_as<Var>()) {
      if (!v->qualifier.empty()) return e;
      auto it = env.find(v->name);
      return it == env.end() ? e : var(it->second);
    }
    if (const auto* a = e.try_as<App>()) return app(expr(*a->fn, env), expr(*a->arg, env));
    if (const auto* i = e.try_as<Infix>()) return infix(i->op, expr(*i->lhs, env), expr(*i->rhs, env));
    if (const auto* t = e.try_as<Tuple>()) {
      Tuple out;
      for (const auto& item : t->items) out.items.push_back(expr(item, env));
      return out;
    }
    if (const auto* c = e.try_as<Case>()) {
      Case out;
      out.scrutinee = expr(*c->scrutinee, env);
      for (const auto& alt : c->alts) {
        auto inner = env;
        Pattern p = pattern(alt.pattern, inner);
        out.alts.push_back(Alt{std::move(p), expr(alt.body, inner)});
      }
      return out;
    }
    if (const auto* l = e.try_as<Let>()) {
      auto inner = env;
      for (const auto& d : l->defs) inner[d.name] = g_.fresh("r");
      Let out;
      for (const auto& d : l->defs) {
        auto body_env = inner;
        LocalDef nd{inner[d.name], {}, {}};
        for (const auto& p : d.params) nd.params.push_back(body_env[p] = g_.fresh("r"));
        nd.body = expr(d.body, body_env);
        out.defs.push_back(std::move(nd));
      }
      out.body = expr(*l->body, inner);
      return out;
    }
    return e;
  }

private:
  Pattern pattern(const Pattern& p, std::map<std::string, std::string>& env) {
    if (const auto* v = p.try_as<PVar>()) return PVar{env[v->name] = g_.fresh("r")};
    if (const auto* c = p.try_as<PCon>()) {
      PCon out{c->qualifier, c->name, {}};
      for (const auto& a : c->args) out.args.push_back(pattern(a, env));
      return out;
    }
    if (const auto* t = p.try_as<PTuple>()) {
      PTuple out;
      for (const auto& a : t->items) out.items.push_back(pattern(a, env));
      return out;
    }
    return p;
  }

  Gen& g_;
};

}  // namespace

Expr rename_binders(const Expr& e, Gen& g) { return Renamer(g).expr(e, {}); }

}  // namespace viewshift::testing
