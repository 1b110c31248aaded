// Operations that create, reshape, lift or delete local definitions.

#include <algorithm>

#include "common.hpp"
#include "viewshift/terms.hpp"
#include "viewshift/walk.hpp"

namespace viewshift {

using namespace refactor_detail;

namespace {

void check_identifier(const std::string& op, const std::string& name) {
  if (!is_variable_name(name) || is_keyword(name))
    fail(RefactorErrorKind::PreconditionFailed, op, "'" + name + "' is not a valid variable name");
}

std::size_t equation_binder_count(const Equation& eq) {
  std::size_t n = eq.locals.size();
  for (const auto& p : eq.patterns) n += pattern_vars(p).size();
  return n;
}

std::size_t pattern_binder_count(const Equation& eq) {
  std::size_t n = 0;
  for (const auto& p : eq.patterns) n += pattern_vars(p).size();
  return n;
}

bool is_where_binder(const Site& s, const std::string& name, const LocalDef* def) {
  const Binder* b = s.scope->lookup(name);
  return b && b->kind == BinderKind::Where && b->def == def;
}

}  // namespace

Project exhibit_function(const Project& p, const std::string& f, const std::string& constructor,
                         const std::string& name, const std::string& module) {
  const std::string op = "exhibit-function";
  return transform(p, op, [&](Project& q) {
    FunDecl& fd = fun_of(module_of(q, module, op), f, op);
    const auto idx = equation_for_constructor(fd, constructor);
    if (!idx) fail(RefactorErrorKind::NotFound, op, "no equation of " + f + " matches on constructor " + constructor);
    check_identifier(op, name);
    Equation& eq = fd.equations[*idx];
    if (name == f || names_in(eq).count(name))
      fail(RefactorErrorKind::NameClash, op, name + " is already used in the " + constructor + " equation of " + f);
    eq.locals.push_back(LocalDef{name, {}, eq.rhs});
    eq.rhs = var(name);
  });
}

Project new_def_fun_app(const Project& p, const std::string& f, std::size_t arg_count, const std::string& name,
                        const std::string& module) {
  const std::string op = "new-def-fun-app";
  if (arg_count == 0) fail(RefactorErrorKind::NotApplicable, op, "an application has at least one argument");
  if (!p.find(module)) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  OccRef occ;
  try {
    occ = find_application(p, module, f, arg_count);
  } catch (const NoSuchApplication& e) {
    fail(RefactorErrorKind::NoSuchApplication, op, e.what());
  }
  return transform(p, op, [&](Project& q) {
    check_identifier(op, name);
    FunDecl& fd = fun_of(module_of(q, module, op), occ.decl, op);
    Equation& eq = fd.equations[occ.path[0]];
    if (name == fd.name || names_in(eq).count(name))
      fail(RefactorErrorKind::NameClash, op, name + " is already used in " + occ.decl);
    const std::size_t base = equation_binder_count(eq);
    bool scoped = true;
    walk_equation(module, fd, occ.path[0], [&](const Expr& e, const Site& s) {
      if (*s.path != occ.path) return Walk::Descend;
      for (const auto& v : free_locals(e))
        if (s.scope->position(v).value_or(base) >= base) scoped = false;
      return Walk::Stop;
    });
    if (!scoped)
      fail(RefactorErrorKind::NotApplicable, op, "the application uses variables bound below the equation level");
    Expr& target = *nodes_on_path(fd, occ.path).back();
    eq.locals.push_back(LocalDef{name, {}, target});
    target = var(name);
  });
}

Project generalise(const Project& p, const std::string& f, const std::string& constructor, const std::string& local,
                   const std::string& module, std::size_t index, const std::string& param, ArgShape shape,
                   GeneraliseMode mode) {
  const std::string op = "generalise";
  return transform(p, op, [&](Project& q) {
    FunDecl& fd = fun_of(module_of(q, module, op), f, op);
    const auto idx = equation_for_constructor(fd, constructor);
    if (!idx) fail(RefactorErrorKind::NotFound, op, "no equation of " + f + " matches on constructor " + constructor);
    Equation& eq = fd.equations[*idx];
    const PCon* pc = nullptr;
    for (const auto& pat : eq.patterns)
      if ((pc = pat.try_as<PCon>())) break;
    const Module* home = q.find(pc->qualifier);
    const ConstructorDef* cd = home ? home->find_constructor(pc->name) : nullptr;
    if (!cd) fail(RefactorErrorKind::NotFound, op, "constructor " + constructor + " has no definition");
    if (cd->shape() != shape)
      fail(RefactorErrorKind::NotFound, op,
           "constructor " + constructor + " is " + (cd->shape() == ArgShape::Tupled ? "tupled" : "curried"));
    const Pattern* vp = nullptr;
    if (shape == ArgShape::Tupled) {
      const auto* tp = pc->args.empty() ? nullptr : pc->args[0].try_as<PTuple>();
      if (tp && index >= 1 && index <= tp->items.size()) vp = &tp->items[index - 1];
    } else if (index >= 1 && index <= pc->args.size()) {
      vp = &pc->args[index - 1];
    }
    if (!vp || !vp->is<PVar>())
      fail(RefactorErrorKind::NotFound, op, "argument " + std::to_string(index) + " of " + constructor + " is not a variable");
    const std::string v = vp->as<PVar>().name;

    auto it = std::find_if(eq.locals.begin(), eq.locals.end(), [&](const LocalDef& d) { return d.name == local; });
    if (it == eq.locals.end())
      fail(RefactorErrorKind::NotFound, op, local + " is not a where-local of the " + constructor + " equation");
    LocalDef& ld = *it;
    check_identifier(op, param);
    std::set<std::string> taken = all_local_names(ld.body);
    for (const auto& fv : free_vars(ld.body))
      if (auto dot = fv.rfind('.'); dot != std::string::npos) taken.insert(fv.substr(dot + 1));
    taken.insert(ld.params.begin(), ld.params.end());
    taken.insert(ld.name);
    if (taken.count(param)) fail(RefactorErrorKind::NameClash, op, param + " is already used in " + local);

    const Var self{module, f};
    Expr target = mode == GeneraliseMode::OtherType ? var(v) : app(Expr(self), var(v));
    std::size_t replaced = 0;
    {
      Equation body_eq;
      for (const auto& prm : ld.params) body_eq.patterns.push_back(pvar(prm));
      body_eq.rhs = ld.body;
      FunDecl holder{local, {std::move(body_eq)}};
      walk_fun(module, holder, [&](Expr& e, const Site& s) {
        if (s.scope->binds(v)) return Walk::Descend;
        if (mode == GeneraliseMode::OtherType) {
          if (const auto* x = e.try_as<Var>(); x && x->qualifier.empty() && x->name == v) {
            e = var(param);
            ++replaced;
            return Walk::Skip;
          }
        } else if (e == target) {
          e = var(param);
          ++replaced;
          return Walk::Skip;
        }
        return Walk::Descend;
      });
      ld.body = holder.equations[0].rhs;
    }
    if (replaced == 0)
      fail(RefactorErrorKind::NotApplicable, op,
           (mode == GeneraliseMode::OtherType ? v : f + " " + v) + " does not occur in the body of " + local);
    ld.params.insert(ld.params.begin(), param);

    const std::size_t patterns = pattern_binder_count(eq);
    const LocalDef* def = &ld;
    bool shadowed = false;
    walk_equation(module, fd, *idx, [&](Expr& e, const Site& s) {
      const auto* x = e.try_as<Var>();
      if (!x || !x->qualifier.empty() || x->name != local || !is_where_binder(s, local, def)) return Walk::Descend;
      if (s.scope->position(v).value_or(patterns) >= patterns) shadowed = true;
      e = app(e, target);
      return Walk::Skip;
    });
    if (shadowed) fail(RefactorErrorKind::PreconditionFailed, op, v + " is rebound at a use site of " + local);
  });
}

Project lift_to_top(const Project& p, const std::string& f, const std::string& local, const std::string& module) {
  const std::string op = "lift-def";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const std::size_t at = decl_index(mod, f, op);
    if (mod.index_of(local))
      fail(RefactorErrorKind::NameClash, op, module + " already has a top-level definition " + local);
    FunDecl& fd = mod.decls[at].fun();
    std::size_t ei = 0;
    std::size_t li = 0;
    bool found = false;
    for (ei = 0; !found && ei < fd.equations.size(); ++ei)
      for (li = 0; li < fd.equations[ei].locals.size(); ++li)
        if (fd.equations[ei].locals[li].name == local) {
          found = true;
          break;
        }
    if (!found) fail(RefactorErrorKind::NotFound, op, local + " is not a where-local of " + f);
    --ei;
    Equation& eq = fd.equations[ei];
    const LocalDef ld = eq.locals[li];

    // Variables of the enclosing equation the local uses become leading parameters.
    std::set<std::string> fv = free_locals(ld.body);
    for (const auto& prm : ld.params) fv.erase(prm);
    std::vector<std::string> extras;
    for (const auto& pat : eq.patterns)
      for (const auto& v : pattern_vars(pat))
        if (fv.count(v)) extras.push_back(v);
    for (const auto& d : eq.locals)
      if (d.name != local && fv.count(d.name)) extras.push_back(d.name);
    std::vector<Expr> extra_args;
    for (const auto& x : extras) extra_args.push_back(var(x));
    const Expr call = apply(Expr(Var{module, local}), extra_args);

    Equation lifted;
    for (const auto& x : extras) lifted.patterns.push_back(pvar(x));
    for (const auto& prm : ld.params) lifted.patterns.push_back(pvar(prm));
    lifted.rhs = ld.body;
    FunDecl top{local, {std::move(lifted)}};
    walk_fun(module, top, [&](Expr& e, const Site& s) {
      if (const auto* x = e.try_as<Var>(); x && x->qualifier.empty() && x->name == local && !s.scope->binds(local)) {
        e = call;
        return Walk::Skip;
      }
      return Walk::Descend;
    });

    const std::size_t base = equation_binder_count(eq);
    const LocalDef* def = &eq.locals[li];
    bool shadowed = false;
    walk_equation(module, fd, ei, [&](Expr& e, const Site& s) {
      const auto* x = e.try_as<Var>();
      if (!x || !x->qualifier.empty() || x->name != local || !is_where_binder(s, local, def)) return Walk::Descend;
      for (const auto& extra : extras)
        if (s.scope->position(extra).value_or(base) >= base) shadowed = true;
      e = call;
      return Walk::Skip;
    });
    if (shadowed)
      fail(RefactorErrorKind::PreconditionFailed, op, "a variable used by " + local + " is rebound at one of its use sites");
    eq.locals.erase(eq.locals.begin() + static_cast<std::ptrdiff_t>(li));
    mod.decls.insert(mod.decls.begin() + static_cast<std::ptrdiff_t>(at) + 1, TopDecl{std::move(top), {}});
  });
}

Project remove_local_def(const Project& p, const std::string& name, const std::string& f, const std::string& module) {
  const std::string op = "remove-local-def";
  return transform(p, op, [&](Project& q) {
    FunDecl& fd = fun_of(module_of(q, module, op), f, op);
    // Where-locals first.
    for (std::size_t ei = 0; ei < fd.equations.size(); ++ei) {
      auto& locals = fd.equations[ei].locals;
      for (std::size_t li = 0; li < locals.size(); ++li) {
        if (locals[li].name != name) continue;
        const LocalDef* def = &locals[li];
        bool used = false;
        walk_equation(module, fd, ei, [&](const Expr& e, const Site& s) {
          if ((*s.path)[1] == 1 + li) return Walk::Skip;  // its own body
          const auto* x = e.try_as<Var>();
          if (x && x->qualifier.empty() && x->name == name && is_where_binder(s, name, def)) {
            used = true;
            return Walk::Stop;
          }
          return Walk::Descend;
        });
        if (used) fail(RefactorErrorKind::StillUsed, op, name + " is still used in " + f);
        locals.erase(locals.begin() + static_cast<std::ptrdiff_t>(li));
        return;
      }
    }
    // Then let bindings, first in document order.
    std::optional<std::vector<std::size_t>> let_path;
    std::size_t def_index = 0;
    walk_fun(module, fd, [&](const Expr& e, const Site& s) {
      if (const auto* l = e.try_as<Let>()) {
        for (std::size_t k = 0; k < l->defs.size(); ++k)
          if (l->defs[k].name == name) {
            let_path = *s.path;
            def_index = k;
            return Walk::Stop;
          }
      }
      return Walk::Descend;
    });
    if (!let_path) fail(RefactorErrorKind::NotFound, op, name + " is not a local definition of " + f);
    Expr& let_node = *nodes_on_path(fd, *let_path).back();
    const LocalDef* def = &let_node.as<Let>().defs[def_index];
    std::vector<std::size_t> own_body = *let_path;
    own_body.push_back(def_index);
    bool used = false;
    walk_fun(module, fd, [&](const Expr& e, const Site& s) {
      if (*s.path == own_body) return Walk::Skip;
      const auto* x = e.try_as<Var>();
      if (x && x->qualifier.empty() && x->name == name) {
        const Binder* b = s.scope->lookup(name);
        if (b && b->kind == BinderKind::Let && b->def == def) {
          used = true;
          return Walk::Stop;
        }
      }
      return Walk::Descend;
    });
    if (used) fail(RefactorErrorKind::StillUsed, op, name + " is still used in " + f);
    Let& l = let_node.as<Let>();
    l.defs.erase(l.defs.begin() + static_cast<std::ptrdiff_t>(def_index));
    if (l.defs.empty()) {
      Expr body = *l.body;
      let_node = std::move(body);
    }
  });
}

}  // namespace viewshift
