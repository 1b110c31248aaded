#include "cbn_oracle.hpp"

#include <map>
#include <memory>
#include <variant>
#include <vector>

namespace viewshift::testing {

namespace {

struct Value;
struct Thunk;
using ThunkPtr = std::shared_ptr<Thunk>;
using Env = std::shared_ptr<std::map<std::string, ThunkPtr>>;

struct ConValue {
  std::string name;
  std::vector<ThunkPtr> args;
};
struct TupleValue {
  std::vector<ThunkPtr> items;
};
struct FunValue {
  enum Kind { Top, Local, Show, Print, Constructor } kind = Top;
  std::string module;
  const FunDecl* top = nullptr;
  const LocalDef* local = nullptr;
  Env env;
  std::string constructor;
  std::size_t arity = 0;
  std::vector<ThunkPtr> args;
};
struct OutValue {
  std::string text;
};

struct Value {
  std::variant<std::int64_t, std::string, ConValue, TupleValue, FunValue, OutValue> v;
};

struct Thunk {
  const Expr* expr = nullptr;
  Env env;
  std::string module;
  const LocalDef* fun = nullptr;  // a local function binding evaluates to itself
};

class Interp {
public:
  explicit Interp(const Project* p) : project_(p) {}

  Value force(const ThunkPtr& t) {
    if (++fuel_ > 5'000'000) throw OracleError("oracle ran out of fuel");
    if (t->fun) {
      FunValue f;
      f.kind = FunValue::Local;
      f.local = t->fun;
      f.env = t->env;
      f.module = t->module;
      f.arity = t->fun->params.size();
      return Value{f};
    }
    return eval(*t->expr, t->env, t->module);
  }

  Value eval(const Expr& e, const Env& env, const std::string& module) {
    if (const auto* i = e.try_as<IntLit>()) return Value{i->value};
    if (const auto* s = e.try_as<StrLit>()) return Value{s->value};
    if (const auto* v = e.try_as<Var>()) {
      if (v->qualifier.empty()) {
        auto it = env->find(v->name);
        if (it != env->end()) return force(it->second);
      }
      return global(*v, module);
    }
    if (const auto* c = e.try_as<Con>()) return constructor(*c, module);
    if (const auto* b = e.try_as<Builtin>()) {
      FunValue f;
      f.kind = b->fn == BuiltinFn::Show ? FunValue::Show : FunValue::Print;
      f.arity = 1;
      return Value{f};
    }
    if (const auto* a = e.try_as<App>()) {
      Value fn = eval(*a->fn, env, module);
      return apply(std::move(fn), delay(*a->arg, env, module));
    }
    if (const auto* x = e.try_as<Infix>()) {
      Value l = eval(*x->lhs, env, module);
      Value r = eval(*x->rhs, env, module);
      if (x->op == InfixOp::Concat) return Value{std::get<std::string>(l.v) + std::get<std::string>(r.v)};
      const auto a = std::get<std::int64_t>(l.v);
      const auto b = std::get<std::int64_t>(r.v);
      return Value{x->op == InfixOp::Add ? a + b : a * b};
    }
    if (const auto* t = e.try_as<Tuple>()) {
      TupleValue out;
      for (const auto& item : t->items) out.items.push_back(delay(item, env, module));
      return Value{out};
    }
    if (const auto* c = e.try_as<Case>()) {
      ThunkPtr s = delay(*c->scrutinee, env, module);
      for (const auto& alt : c->alts) {
        auto bound = std::make_shared<std::map<std::string, ThunkPtr>>(*env);
        if (match(alt.pattern, s, *bound)) return eval(alt.body, bound, module);
      }
      throw OracleError("no case alternative matches");
    }
    const auto& l = e.as<Let>();
    Env inner = bind_locals(l.defs, env, module);
    return eval(*l.body, inner, module);
  }

  std::string show(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v.v)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&v.v)) return "\"" + *s + "\"";
    throw OracleError("the oracle only shows integers and strings");
  }

private:
  ThunkPtr delay(const Expr& e, const Env& env, const std::string& module) {
    return std::make_shared<Thunk>(Thunk{&e, env, module, nullptr});
  }

  Env bind_locals(const std::vector<LocalDef>& defs, const Env& env, const std::string& module) {
    auto inner = std::make_shared<std::map<std::string, ThunkPtr>>(*env);
    for (const auto& d : defs)
      (*inner)[d.name] = std::make_shared<Thunk>(Thunk{&d.body, inner, module, d.params.empty() ? nullptr : &d});
    return inner;
  }

  const Module& module_named(const std::string& name) {
    const Module* m = project_->find(name);
    if (!m) throw OracleError("no module " + name);
    return *m;
  }

  static bool exported(const Module& m, const std::string& name) {
    if (!m.exports) return true;
    for (const auto& e : *m.exports)
      if (e == name) return true;
    return false;
  }

  // Module defining `name` as seen from `module`: itself first, then imports.
  std::string home(const std::string& qualifier, const std::string& name, const std::string& module, bool ctor) {
    auto defines = [&](const Module& m) {
      if (ctor) return m.find_constructor(name) != nullptr;
      return m.find_fun(name) != nullptr;
    };
    if (!qualifier.empty()) return qualifier;
    if (defines(module_named(module))) return module;
    for (const auto& imp : module_named(module).imports) {
      const Module& m = module_named(imp);
      if (!defines(m)) continue;
      if (ctor) {
        for (const auto& d : m.decls)
          if (d.is_data() && exported(m, d.data().name))
            for (const auto& c : d.data().constructors)
              if (c.name == name) return imp;
      } else if (exported(m, name)) {
        return imp;
      }
    }
    throw OracleError("unbound " + name + " in " + module);
  }

  Value global(const Var& v, const std::string& module) {
    const std::string where = home(v.qualifier, v.name, module, false);
    const FunDecl* f = module_named(where).find_fun(v.name);
    if (!f) throw OracleError("no function " + v.name + " in " + where);
    FunValue fn;
    fn.kind = FunValue::Top;
    fn.top = f;
    fn.module = where;
    fn.arity = f->arity();
    if (fn.arity == 0) return run(fn);
    return Value{fn};
  }

  Value constructor(const Con& c, const std::string& module) {
    const std::string where = home(c.qualifier, c.name, module, true);
    const ConstructorDef* def = module_named(where).find_constructor(c.name);
    if (def->args.empty()) return Value{ConValue{c.name, {}}};
    FunValue fn;
    fn.kind = FunValue::Constructor;
    fn.constructor = c.name;
    fn.arity = def->args.size();
    return Value{fn};
  }

  Value apply(Value fn, ThunkPtr arg) {
    auto* f = std::get_if<FunValue>(&fn.v);
    if (!f) throw OracleError("applying a non-function");
    f->args.push_back(std::move(arg));
    if (f->args.size() < f->arity) return fn;
    std::vector<ThunkPtr> extra(f->args.begin() + static_cast<std::ptrdiff_t>(f->arity), f->args.end());
    f->args.resize(f->arity);
    Value result = run(*f);
    for (auto& a : extra) result = apply(std::move(result), a);
    return result;
  }

  Value run(const FunValue& f) {
    switch (f.kind) {
      case FunValue::Show: return Value{show(force(f.args[0]))};
      case FunValue::Print: return Value{OutValue{std::get<std::string>(force(f.args[0]).v)}};
      case FunValue::Constructor: return Value{ConValue{f.constructor, f.args}};
      case FunValue::Local: {
        auto inner = std::make_shared<std::map<std::string, ThunkPtr>>(*f.env);
        for (std::size_t i = 0; i < f.args.size(); ++i) (*inner)[f.local->params[i]] = f.args[i];
        return eval(f.local->body, inner, f.module);
      }
      case FunValue::Top: break;
    }
    for (const auto& eq : f.top->equations) {
      auto bound = std::make_shared<std::map<std::string, ThunkPtr>>();
      bool ok = true;
      for (std::size_t i = 0; ok && i < eq.patterns.size(); ++i) ok = match(eq.patterns[i], f.args[i], *bound);
      if (!ok) continue;
      Env env = eq.locals.empty() ? bound : bind_locals(eq.locals, bound, f.module);
      return eval(eq.rhs, env, f.module);
    }
    throw OracleError("no equation of " + f.top->name + " matches");
  }

  bool match(const Pattern& p, const ThunkPtr& t, std::map<std::string, ThunkPtr>& out) {
    if (const auto* v = p.try_as<PVar>()) {
      out[v->name] = t;
      return true;
    }
    if (p.is<PWild>()) return true;
    Value value = force(t);
    if (const auto* i = p.try_as<PInt>()) return std::get<std::int64_t>(value.v) == i->value;
    if (const auto* c = p.try_as<PCon>()) {
      const auto& cv = std::get<ConValue>(value.v);
      if (cv.name != c->name || cv.args.size() != c->args.size()) return false;
      for (std::size_t k = 0; k < c->args.size(); ++k)
        if (!match(c->args[k], cv.args[k], out)) return false;
      return true;
    }
    const auto& tp = p.as<PTuple>();
    const auto& tv = std::get<TupleValue>(value.v);
    if (tv.items.size() != tp.items.size()) return false;
    for (std::size_t k = 0; k < tp.items.size(); ++k)
      if (!match(tp.items[k], tv.items[k], out)) return false;
    return true;
  }

  const Project* project_;
  std::size_t fuel_ = 0;
};

}  // namespace

std::string cbn_observe(const Project& project, const std::string& module, const std::string& entry) {
  Interp in(&project);
  Expr e = var(entry, module);
  Value v = in.eval(e, std::make_shared<std::map<std::string, ThunkPtr>>(), module);
  if (const auto* out = std::get_if<OutValue>(&v.v)) return out->text;
  return in.show(v);
}

std::int64_t cbn_int(const Expr& closed) {
  Project empty;
  empty.modules.emplace("Main", Module{"Main", std::nullopt, {}, {}});
  Interp in(&empty);
  Value v = in.eval(closed, std::make_shared<std::map<std::string, ThunkPtr>>(), "Main");
  const auto* i = std::get_if<std::int64_t>(&v.v);
  if (!i) throw OracleError("not an integer");
  return *i;
}

}  // namespace viewshift::testing
