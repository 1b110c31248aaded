// Operations on top-level definitions and module structure.

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

bool uses(const FunDecl& f, const std::string& module, const Var& target) {
  bool found = false;
  walk_fun(module, f, [&](const Expr& e, const Site&) {
    if (const auto* v = e.try_as<Var>(); v && *v == target) {
      found = true;
      return Walk::Stop;
    }
    return Walk::Descend;
  });
  return found;
}

}  // namespace

Project generalise_ident(const Project& p, const std::string& f, const std::string& module, const std::string& ident,
                         const std::string& param) {
  const std::string op = "generalise-ident";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const std::size_t at = decl_index(mod, f, op);
    const Var self{module, f};
    const Var target = resolve_global(p, module, ident, op);
    if (target == self) fail(RefactorErrorKind::NotApplicable, op, f + " cannot be abstracted over itself");
    FunDecl& fd = mod.decls[at].fun();
    if (!uses(fd, module, target)) fail(RefactorErrorKind::NotFound, op, ident + " does not occur free in " + f);
    check_identifier(op, param);
    if (names_in(fd).count(param)) fail(RefactorErrorKind::NameClash, op, param + " is already used in " + f);

    walk_fun(module, fd, [&](Expr& e, const Site&) {
      if (const auto* v = e.try_as<Var>()) {
        if (*v == target) {
          e = var(param);
          return Walk::Skip;
        }
        if (*v == self) {
          e = app(e, var(param));
          return Walk::Skip;
        }
      }
      return Walk::Descend;
    });
    for (auto& eq : fd.equations) eq.patterns.insert(eq.patterns.begin(), pvar(param));

    std::set<std::string> top_names;
    for (const auto& [name, m] : q.modules)
      for (const auto& d : m.decls) top_names.insert(d.name());
    std::optional<std::string> alias;
    walk_project(q, [&](Expr& e, const Site& s) {
      if (*s.module == module && *s.decl == f) return Walk::Skip;
      const auto* v = e.try_as<Var>();
      if (!v || *v != self) return Walk::Descend;
      if (*s.module == module) {
        e = app(e, Expr(target));
      } else {
        if (!alias) alias = fresh_name(f, top_names);
        e = app(e, Expr(Var{module, *alias}));
      }
      return Walk::Skip;
    });
    if (alias) {
      FunDecl binding{*alias, {Equation{{}, Expr(target), {}}}};
      mod.decls.insert(mod.decls.begin() + static_cast<std::ptrdiff_t>(at) + 1, TopDecl{std::move(binding), {}});
    }
  });
}

Project rename_top_level(const Project& p, const std::string& f, const std::string& module, const std::string& new_name) {
  const std::string op = "rename-top-level";
  const Module* original = p.find(module);
  if (!original) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  if (!original->find_fun(f)) fail(RefactorErrorKind::NotFound, op, "no top-level definition " + f + " in " + module);
  if (f == new_name) return p;
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    check_identifier(op, new_name);
    if (mod.index_of(new_name))
      fail(RefactorErrorKind::NameClash, op, module + " already defines " + new_name);
    const Var from{module, f};
    std::optional<OccRef> clash;
    walk_project(q, [&](const Expr& e, const Site& s) {
      const auto* v = e.try_as<Var>();
      if (v && *v == from && s.scope->binds(new_name)) {
        clash = OccRef{*s.module, *s.decl, *s.path};
        return Walk::Stop;
      }
      return Walk::Descend;
    });
    if (clash)
      fail(RefactorErrorKind::NameClash, op,
           "a use of " + f + " " + describe(*clash) + " is in the scope of a local " + new_name);
    // A local of f's own declaration named new_name would capture its recursive calls.
    retarget(q, from, Var{module, new_name});
    fun_of(mod, f, op).name = new_name;
    if (mod.exports)
      for (auto& e : *mod.exports)
        if (e == f) e = new_name;
  });
}

Project move_def(const Project& p, const std::string& f, const std::string& from, const std::string& to) {
  const std::string op = "move-def";
  return transform(p, op, [&](Project& q) {
    Module& src = module_of(q, from, op);
    const std::size_t at = decl_index(src, f, op);
    if (from == to) fail(RefactorErrorKind::NameClash, op, to + " already defines " + f);
    if (!q.find(to)) {
      if (!is_constructor_name(to) || is_keyword(to))
        fail(RefactorErrorKind::PreconditionFailed, op, "'" + to + "' is not a valid module name");
      q.modules.emplace(to, Module{to, std::nullopt, {}, {}});
    }
    Module& dst = *q.find(to);
    if (dst.index_of(f)) fail(RefactorErrorKind::NameClash, op, to + " already defines " + f);
    TopDecl decl = std::move(src.decls[at]);
    src.decls.erase(src.decls.begin() + static_cast<std::ptrdiff_t>(at));
    prune_export(src, f);
    dst.decls.push_back(std::move(decl));
    retarget(q, Var{from, f}, Var{to, f});
  });
}

Project remove_def(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "remove-def";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const std::size_t at = decl_index(mod, f, op);
    if (auto use = first_reference(q, Var{module, f}, module, f))
      fail(RefactorErrorKind::StillUsed, op, f + " is still used " + describe(*use));
    mod.decls.erase(mod.decls.begin() + static_cast<std::ptrdiff_t>(at));
    prune_export(mod, f);
  });
}

Project clean_imports(const Project& p, const std::string& module) {
  const std::string op = "clean-imports";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const auto used = referenced_modules(mod);
    std::vector<std::string> kept;
    for (const auto& i : mod.imports)
      if (std::find(used.begin(), used.end(), i) != used.end()) kept.push_back(i);
    mod.imports = std::move(kept);
  });
}

Project rm_from_exports(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "rm-from-exports";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    if (!mod.exports || std::find(mod.exports->begin(), mod.exports->end(), f) == mod.exports->end())
      fail(RefactorErrorKind::NotFound, op, f + " is not in the export list of " + module);
    std::set<std::string> names{f};
    for (const auto& d : mod.decls)
      if (d.is_data() && d.data().name == f)
        for (const auto& c : d.data().constructors) names.insert(c.name);
    std::optional<std::string> user;
    for (const auto& [name, m] : q.modules) {
      if (name == module) continue;
      walk_module(m, [&](const Expr& e, const Site& s) {
        const auto* v = e.try_as<Var>();
        const auto* c = e.try_as<Con>();
        if ((v && v->qualifier == module && names.count(v->name)) || (c && c->qualifier == module && names.count(c->name))) {
          user = *s.module + "." + *s.decl;
          return Walk::Stop;
        }
        return Walk::Descend;
      });
      for (const auto& d : m.decls)
        if (d.is_fun())
          for (const auto& eq : d.fun().equations)
            for (const auto& pat : eq.patterns)
              if (const auto* pc = pat.try_as<PCon>(); pc && pc->qualifier == module && names.count(pc->name))
                user = name + "." + d.name();
      if (user) break;
    }
    if (user) fail(RefactorErrorKind::StillUsed, op, f + " is still used in " + *user);
    prune_export(mod, f);
  });
}

Project unify_alpha(const Project& p, const std::string& keep, const std::string& drop, const std::string& module) {
  const std::string op = "unify-alpha";
  if (keep == drop) fail(RefactorErrorKind::NotFound, op, "the definition to drop must differ from the one kept");
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const FunDecl& k = fun_of(mod, keep, op);
    const std::size_t at = decl_index(mod, drop, op);
    const FunDecl& d = mod.decls[at].fun();
    if (!alpha_eq(k, d, GlobalRenaming{{{module, keep}, {module, drop}}}))
      fail(RefactorErrorKind::PreconditionFailed, op, keep + " and " + drop + " are not alpha-equivalent");
    mod.decls.erase(mod.decls.begin() + static_cast<std::ptrdiff_t>(at));
    prune_export(mod, drop);
    retarget(q, Var{module, drop}, Var{module, keep});
  });
}

Project remove_module(const Project& p, const std::string& module) {
  const std::string op = "remove-module";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    if (!mod.decls.empty()) fail(RefactorErrorKind::NotApplicable, op, module + " still declares " + mod.decls.front().name());
    for (const auto& [name, m] : q.modules)
      if (m.imports_module(module)) fail(RefactorErrorKind::StillUsed, op, module + " is imported by " + name);
    q.modules.erase(module);
  });
}

}  // namespace viewshift
