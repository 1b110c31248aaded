#include "viewshift/evaluator.hpp"

#include <pthread.h>

#include <exception>
#include <functional>
#include <memory>
#include <tuple>
#include <set>

#include "viewshift/errors.hpp"
#include "viewshift/resolver.hpp"

namespace viewshift {

bool VCon::operator==(const VCon& o) const { return name == o.name && args == o.args; }
bool VTuple::operator==(const VTuple& o) const { return items == o.items; }

const char* to_string(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::PatternMatchFailure: return "PatternMatchFailure";
    case EvalErrorKind::UnresolvedName: return "UnresolvedName";
    case EvalErrorKind::StepBudgetExceeded: return "StepBudgetExceeded";
    case EvalErrorKind::TypeError: return "TypeError";
    case EvalErrorKind::BlackHole: return "BlackHole";
  }
  return "?";
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

bool needs_parens(const Value& v) {
  if (const auto* c = std::get_if<VCon>(&v.node)) return !c->args.empty();
  if (const auto* i = std::get_if<VInt>(&v.node)) return i->value < 0;
  return false;
}

}  // namespace

std::string show_value(const Value& v) {
  struct Visitor {
    std::string operator()(const VInt& i) const { return std::to_string(i.value); }
    std::string operator()(const VStr& s) const { return quote(s.value); }
    std::string operator()(const VCon& c) const {
      std::string out = c.name;
      for (const auto& a : c.args) {
        const std::string s = show_value(a);
        out += " " + (needs_parens(a) ? "(" + s + ")" : s);
      }
      return out;
    }
    std::string operator()(const VTuple& t) const {
      std::string out = "(";
      for (std::size_t k = 0; k < t.items.size(); ++k) out += (k ? ", " : "") + show_value(t.items[k]);
      return out + ")";
    }
    std::string operator()(const VClosure& c) const { return "<function " + c.label + ">"; }
    std::string operator()(const VOutput& o) const { return o.text; }
  };
  return std::visit(Visitor{}, v.node);
}

std::string observation_text(const Value& v) {
  if (const auto* o = std::get_if<VOutput>(&v.node)) return o->text;
  return show_value(v);
}

namespace {

// ---------------------------------------------------------------------------
// Machine state

using CellId = std::size_t;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  CellId cell;
  Env next;
};

Env extend(Env env, std::string name, CellId cell) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), cell, std::move(env)});
}

std::optional<CellId> env_lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return n->cell;
  return std::nullopt;
}

enum class ClosureKind { Function, Local, Builtin, Constructor };

struct RValue;
using RV = std::shared_ptr<const RValue>;

struct RClosure {
  ClosureKind kind;
  const FunDecl* fun = nullptr;     // Function
  const LocalDef* local = nullptr;  // Local
  BuiltinFn builtin = BuiltinFn::Show;
  std::string label;                // qualified name or constructor id
  std::size_t arity = 0;
  Env env;                          // Local
  std::vector<CellId> args;         // already supplied
};

struct RValue {
  std::variant<std::int64_t, std::string, /*con*/ std::pair<std::string, std::vector<CellId>>,
               /*tuple*/ std::vector<CellId>, RClosure, /*output*/ std::monostate>
      node;
  std::string output;  // for print results
};

struct Cell {
  enum class State { Thunk, Forcing, Done } state = State::Thunk;
  const Expr* expr = nullptr;
  const FunDecl* caf = nullptr;
  Env env;
  RV value;
};

class Machine {
public:
  Machine(const Project& pinned, const EvalOptions& options, EvalStats& stats)
      : options_(options), stats_(stats) {
    for (const auto& [name, m] : pinned.modules) {
      for (const auto& d : m.decls) {
        if (d.is_fun()) {
          funs_[name + "." + d.fun().name] = &d.fun();
        } else {
          for (const auto& c : d.data().constructors) cons_[name + "." + c.name] = c.args.size();
        }
      }
    }
  }

  RV eval(const Expr* e, Env env);
  RV force(CellId id);
  Value deep(const RV& v);

  CellId global_cell(const std::string& id) {
    auto it = caf_cells_.find(id);
    if (it != caf_cells_.end()) return it->second;
    const CellId c = alloc_thunk(nullptr, nullptr);
    cells_[c].caf = funs_.at(id);
    caf_cells_[id] = c;
    return c;
  }

  const std::map<std::string, const FunDecl*>& functions() const { return funs_; }

private:
  struct Depth {
    explicit Depth(Machine& m) : m_(m) {
      if (++m_.depth_ > m_.options_.depth_limit)
        throw EvalError(EvalErrorKind::StepBudgetExceeded, "evaluation nested deeper than " +
                                                               std::to_string(m_.options_.depth_limit));
    }
    ~Depth() { --m_.depth_; }
    Machine& m_;
  };

  void tick() {
    if (++stats_.steps > options_.step_budget)
      throw EvalError(EvalErrorKind::StepBudgetExceeded, "more than " + std::to_string(options_.step_budget) + " steps");
  }

  CellId alloc_thunk(const Expr* e, Env env) {
    cells_.push_back(Cell{Cell::State::Thunk, e, nullptr, std::move(env), nullptr});
    return cells_.size() - 1;
  }
  CellId alloc_value(RV v) {
    cells_.push_back(Cell{Cell::State::Done, nullptr, nullptr, nullptr, std::move(v)});
    return cells_.size() - 1;
  }

  // Argument cells: variables share their cell, literals are stored evaluated.
  CellId delay(const Expr* e, const Env& env) {
    if (const auto* v = e->try_as<Var>()) {
      if (v->qualifier.empty()) {
        if (auto c = env_lookup(env, v->name)) return *c;
      } else if (auto f = funs_.find(v->qualifier + "." + v->name); f != funs_.end() && f->second->arity() == 0) {
        return global_cell(f->first);
      }
    }
    if (const auto* i = e->try_as<IntLit>()) return alloc_value(make_int(i->value));
    if (const auto* s = e->try_as<StrLit>()) return alloc_value(make_str(s->value));
    return alloc_thunk(e, env);
  }

  static RV make_int(std::int64_t v) { return std::make_shared<const RValue>(RValue{v, {}}); }
  static RV make_str(std::string s) { return std::make_shared<const RValue>(RValue{std::move(s), {}}); }
  static RV make_closure(RClosure c) { return std::make_shared<const RValue>(RValue{std::move(c), {}}); }

  Env bind_locals(const std::vector<LocalDef>& defs, Env env) {
    std::vector<CellId> ids;
    for (const auto& d : defs) {
      ids.push_back(alloc_thunk(nullptr, nullptr));
      env = extend(env, d.name, ids.back());
    }
    for (std::size_t k = 0; k < defs.size(); ++k) {
      const auto& d = defs[k];
      Cell& c = cells_[ids[k]];
      if (d.params.empty()) {
        c.expr = &d.body;
        c.env = env;
      } else {
        RClosure cl{ClosureKind::Local, nullptr, &d, BuiltinFn::Show, d.name, d.params.size(), env, {}};
        c.state = Cell::State::Done;
        c.value = make_closure(std::move(cl));
      }
    }
    return env;
  }

  bool match(const Pattern& p, CellId cell, Env& env) {
    if (const auto* v = p.try_as<PVar>()) {
      env = extend(env, v->name, cell);
      return true;
    }
    if (p.is<PWild>()) return true;
    RV val = force(cell);
    if (const auto* i = p.try_as<PInt>()) {
      const auto* n = std::get_if<std::int64_t>(&val->node);
      if (!n) throw EvalError(EvalErrorKind::TypeError, "integer pattern against a non-integer");
      return *n == i->value;
    }
    if (const auto* c = p.try_as<PCon>()) {
      const auto* con = std::get_if<std::pair<std::string, std::vector<CellId>>>(&val->node);
      if (!con) throw EvalError(EvalErrorKind::TypeError, "constructor pattern " + c->name + " against a non-constructor");
      if (con->first != c->qualifier + "." + c->name) return false;
      if (con->second.size() != c->args.size())
        throw EvalError(EvalErrorKind::TypeError, "constructor " + c->name + " matched with wrong arity");
      for (std::size_t k = 0; k < c->args.size(); ++k)
        if (!match(c->args[k], con->second[k], env)) return false;
      return true;
    }
    const auto& t = p.as<PTuple>();
    const auto* items = std::get_if<std::vector<CellId>>(&val->node);
    if (!items || items->size() != t.items.size())
      throw EvalError(EvalErrorKind::TypeError, "tuple pattern against a value of another shape");
    for (std::size_t k = 0; k < t.items.size(); ++k)
      if (!match(t.items[k], (*items)[k], env)) return false;
    return true;
  }

  // Selects the matching equation of `f`; returns its body and environment.
  std::pair<const Expr*, Env> enter(const FunDecl& f, const std::vector<CellId>& args) {
    for (const auto& eq : f.equations) {
      Env env;
      bool ok = true;
      for (std::size_t k = 0; ok && k < eq.patterns.size(); ++k) ok = match(eq.patterns[k], args[k], env);
      if (!ok) continue;
      if (!eq.locals.empty()) env = bind_locals(eq.locals, env);
      return {&eq.rhs, env};
    }
    throw EvalError(EvalErrorKind::PatternMatchFailure, "no equation of " + f.name + " matches");
  }

  std::string text_of(CellId cell) {
    RV v = force(cell);
    if (const auto* s = std::get_if<std::string>(&v->node)) return *s;
    throw EvalError(EvalErrorKind::TypeError, "expected a string");
  }
  std::int64_t int_of(const RV& v) {
    if (const auto* n = std::get_if<std::int64_t>(&v->node)) return *n;
    throw EvalError(EvalErrorKind::TypeError, "expected an integer");
  }

  const EvalOptions& options_;
  EvalStats& stats_;
  std::map<std::string, const FunDecl*> funs_;
  std::map<std::string, std::size_t> cons_;
  std::map<std::string, CellId> caf_cells_;
  std::vector<Cell> cells_;
  std::size_t depth_ = 0;
};

RV Machine::force(CellId id) {
  if (cells_[id].state == Cell::State::Done) return cells_[id].value;
  if (cells_[id].state == Cell::State::Forcing)
    throw EvalError(EvalErrorKind::BlackHole, "a value depends on itself");
  Depth guard(*this);
  cells_[id].state = Cell::State::Forcing;
  ++stats_.thunks_forced;
  RV v;
  if (const FunDecl* caf = cells_[id].caf) {
    auto [body, env] = enter(*caf, {});
    v = eval(body, env);
  } else {
    const Expr* e = cells_[id].expr;
    Env env = cells_[id].env;
    v = eval(e, env);
  }
  Cell& c = cells_[id];
  c.state = Cell::State::Done;
  c.value = v;
  c.env = nullptr;
  return v;
}

RV Machine::eval(const Expr* e, Env env) {
  Depth guard(*this);
  for (;;) {
    tick();
    if (const auto* i = e->try_as<IntLit>()) return make_int(i->value);
    if (const auto* s = e->try_as<StrLit>()) return make_str(s->value);
    if (const auto* v = e->try_as<Var>()) {
      if (v->qualifier.empty()) {
        auto c = env_lookup(env, v->name);
        if (!c) throw EvalError(EvalErrorKind::UnresolvedName, v->name);
        return force(*c);
      }
      const std::string id = v->qualifier + "." + v->name;
      auto f = funs_.find(id);
      if (f == funs_.end()) throw EvalError(EvalErrorKind::UnresolvedName, id);
      if (f->second->arity() == 0) return force(global_cell(id));
      return make_closure(RClosure{ClosureKind::Function, f->second, nullptr, BuiltinFn::Show, id, f->second->arity(), nullptr, {}});
    }
    if (const auto* c = e->try_as<Con>()) {
      const std::string id = c->qualifier + "." + c->name;
      auto k = cons_.find(id);
      if (k == cons_.end()) throw EvalError(EvalErrorKind::UnresolvedName, id);
      if (k->second == 0)
        return std::make_shared<const RValue>(RValue{std::pair{id, std::vector<CellId>{}}, {}});
      return make_closure(RClosure{ClosureKind::Constructor, nullptr, nullptr, BuiltinFn::Show, id, k->second, nullptr, {}});
    }
    if (const auto* b = e->try_as<Builtin>())
      return make_closure(RClosure{ClosureKind::Builtin, nullptr, nullptr, b->fn, b->fn == BuiltinFn::Show ? "show" : "print", 1, nullptr, {}});
    if (const auto* x = e->try_as<Infix>()) {
      RV l = eval(x->lhs.get(), env);
      RV r = eval(x->rhs.get(), env);
      switch (x->op) {
        case InfixOp::Add: return make_int(int_of(l) + int_of(r));
        case InfixOp::Mul: return make_int(int_of(l) * int_of(r));
        case InfixOp::Concat: {
          const auto* ls = std::get_if<std::string>(&l->node);
          const auto* rs = std::get_if<std::string>(&r->node);
          if (!ls || !rs) throw EvalError(EvalErrorKind::TypeError, "++ expects strings");
          return make_str(*ls + *rs);
        }
      }
    }
    if (const auto* t = e->try_as<Tuple>()) {
      std::vector<CellId> items;
      for (const auto& item : t->items) items.push_back(delay(&item, env));
      return std::make_shared<const RValue>(RValue{std::move(items), {}});
    }
    if (const auto* k = e->try_as<Case>()) {
      const CellId scrutinee = delay(k->scrutinee.get(), env);
      const Expr* next = nullptr;
      for (const auto& alt : k->alts) {
        Env alt_env = env;
        if (match(alt.pattern, scrutinee, alt_env)) {
          next = &alt.body;
          env = alt_env;
          break;
        }
      }
      if (!next) throw EvalError(EvalErrorKind::PatternMatchFailure, "no case alternative matches");
      e = next;
      continue;
    }
    if (const auto* l = e->try_as<Let>()) {
      env = bind_locals(l->defs, env);
      e = l->body.get();
      continue;
    }

    // Application: evaluate the head, then feed arguments, entering saturated
    // function bodies in place so tail calls do not grow the native stack.
    const Spine sp = spine_of(*e);
    std::vector<CellId> args;
    for (const Expr* a : sp.args) args.push_back(delay(a, env));
    RV f = eval(sp.head, env);
    bool entered = false;
    while (!args.empty()) {
      const auto* cl = std::get_if<RClosure>(&f->node);
      if (!cl) throw EvalError(EvalErrorKind::TypeError, "application of a non-function");
      RClosure next = *cl;
      const std::size_t take = std::min(next.arity - next.args.size(), args.size());
      next.args.insert(next.args.end(), args.begin(), args.begin() + static_cast<std::ptrdiff_t>(take));
      args.erase(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(take));
      if (next.args.size() < next.arity) {
        f = make_closure(std::move(next));
        continue;
      }
      const Expr* body = nullptr;
      Env body_env;
      switch (next.kind) {
        case ClosureKind::Function: std::tie(body, body_env) = enter(*next.fun, next.args); break;
        case ClosureKind::Local: {
          body = &next.local->body;
          body_env = next.env;
          for (std::size_t k = 0; k < next.arity; ++k) body_env = extend(body_env, next.local->params[k], next.args[k]);
          break;
        }
        case ClosureKind::Constructor:
          f = std::make_shared<const RValue>(RValue{std::pair{next.label, next.args}, {}});
          continue;
        case ClosureKind::Builtin: {
          if (next.builtin == BuiltinFn::Show) {
            f = make_str(show_value(deep(force(next.args[0]))));
          } else {
            RV v = force(next.args[0]);
            auto out = std::make_shared<RValue>(RValue{std::monostate{}, {}});
            if (const auto* s = std::get_if<std::string>(&v->node))
              out->output = *s;
            else
              out->output = show_value(deep(v));
            f = out;
          }
          continue;
        }
      }
      if (args.empty()) {
        e = body;
        env = body_env;
        entered = true;
        break;
      }
      f = eval(body, body_env);
    }
    if (entered) continue;
    return f;
  }
}

Value Machine::deep(const RV& v) {
  Depth guard(*this);
  struct Visitor {
    Machine& m;
    Value operator()(std::int64_t n) const { return Value{VInt{n}}; }
    Value operator()(const std::string& s) const { return Value{VStr{s}}; }
    Value operator()(const std::pair<std::string, std::vector<CellId>>& c) const {
      VCon out{c.first.substr(c.first.rfind('.') + 1), {}};
      for (CellId a : c.second) out.args.push_back(m.deep(m.force(a)));
      return Value{std::move(out)};
    }
    Value operator()(const std::vector<CellId>& t) const {
      VTuple out;
      for (CellId a : t) out.items.push_back(m.deep(m.force(a)));
      return Value{std::move(out)};
    }
    Value operator()(const RClosure& c) const { return Value{VClosure{c.arity - c.args.size(), c.label}}; }
    Value operator()(std::monostate) const { return Value{}; }
  };
  if (std::holds_alternative<std::monostate>(v->node)) return Value{VOutput{v->output}};
  return std::visit(Visitor{*this}, v->node);
}

// Runs `fn` on a thread with a large native stack; the evaluator recurses on
// non-tail positions and is bounded by EvalOptions::depth_limit instead.
void on_large_stack(const std::function<void()>& fn) {
  constexpr std::size_t kStackBytes = std::size_t{512} << 20;
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};
  auto trampoline = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    try {
      (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStackBytes);
  pthread_t thread;
  const int rc = pthread_create(&thread, &attr, trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // fall back to the calling thread
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

Project pin_for_eval(const Project& project) {
  try {
    return pin(project);
  } catch (const ResolveError& e) {
    throw EvalError(EvalErrorKind::UnresolvedName, e.what());
  }
}

std::string entry_id(const Project& project, const std::string& entry) {
  if (const auto dot = entry.rfind('.'); dot != std::string::npos) {
    const Module* m = project.find(entry.substr(0, dot));
    if (!m || !m->find_fun(entry.substr(dot + 1))) throw EvalError(EvalErrorKind::UnresolvedName, entry);
    return entry;
  }
  std::vector<std::string> homes;
  for (const auto& [name, m] : project.modules)
    if (m.find_fun(entry)) homes.push_back(name);
  if (homes.size() != 1)
    throw EvalError(EvalErrorKind::UnresolvedName,
                    entry + (homes.empty() ? " is not defined" : " is defined in several modules"));
  return homes.front() + "." + entry;
}

}  // namespace

Value evaluate(const Project& project, const std::string& module, const Expr& expr, const EvalOptions& options,
               EvalStats* stats) {
  const Project pinned = pin_for_eval(project);
  Expr e;
  try {
    e = pin_expr(project, module, expr);
  } catch (const ResolveError& err) {
    throw EvalError(EvalErrorKind::UnresolvedName, err.what());
  } catch (const std::out_of_range&) {
    throw EvalError(EvalErrorKind::UnresolvedName, "no module " + module);
  }
  EvalStats local;
  EvalStats& s = stats ? *stats : local;
  Value result;
  on_large_stack([&] {
    Machine m(pinned, options, s);
    result = m.deep(m.eval(&e, nullptr));
  });
  return result;
}

std::map<std::string, std::string> observe_entries(const Project& project, const std::vector<std::string>& entries,
                                                   const EvalOptions& options) {
  const Project pinned = pin_for_eval(project);
  std::map<std::string, std::string> out;
  for (const auto& entry : entries) {
    const std::string id = entry_id(project, entry);
    on_large_stack([&] {
      EvalStats stats;
      Machine m(pinned, options, stats);
      const FunDecl* f = m.functions().at(id);
      if (f->arity() != 0) throw EvalError(EvalErrorKind::TypeError, entry + " takes arguments");
      out[entry] = observation_text(m.deep(m.force(m.global_cell(id))));
    });
  }
  return out;
}

ObservationReport observational_eq(const Project& a, const Project& b, const std::vector<std::string>& entries,
                                   const EvalOptions& options) {
  ObservationReport r;
  try {
    r.first = observe_entries(a, entries, options);
  } catch (const EvalError& e) {
    throw ObservationError(1, e.what());
  }
  try {
    r.second = observe_entries(b, entries, options);
  } catch (const EvalError& e) {
    throw ObservationError(2, e.what());
  }
  for (const auto& entry : entries)
    if (r.first.at(entry) != r.second.at(entry)) r.mismatched.push_back(entry);
  r.equivalent = r.mismatched.empty();
  return r;
}

}  // namespace viewshift
