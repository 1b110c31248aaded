#include "viewshift/resolver.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "viewshift/walk.hpp"

namespace viewshift {
namespace {

std::string qualify(const std::string& m, const std::string& n) { return m + "." + n; }

std::pair<std::string, std::string> split_qualified(const std::string& name) {
  const auto dot = name.rfind('.');
  if (dot == std::string::npos) return {"", name};
  return {name.substr(0, dot), name.substr(dot + 1)};
}

bool exports_value(const Module& m, const std::string& name) {
  if (!m.find_fun(name)) return false;
  if (!m.exports) return true;
  return std::find(m.exports->begin(), m.exports->end(), name) != m.exports->end();
}

const DataDecl* type_of_constructor(const Module& m, const std::string& con) {
  for (const auto& d : m.decls) {
    if (!d.is_data()) continue;
    for (const auto& c : d.data().constructors)
      if (c.name == con) return &d.data();
  }
  return nullptr;
}

bool exports_constructor(const Module& m, const std::string& con) {
  const DataDecl* type = type_of_constructor(m, con);
  if (!type) return false;
  if (!m.exports) return true;
  return std::find(m.exports->begin(), m.exports->end(), type->name) != m.exports->end();
}

// Structural checks and visibility tables; expression bodies are not inspected.
SymbolTable build_table(const Project& project) {
  SymbolTable table;
  for (const auto& [key, m] : project.modules) {
    if (key != m.name)
      throw ResolveError(ResolveErrorKind::DuplicateDefinition, key, m.name, "module stored under another name");
    std::set<std::string> values;
    std::set<std::string> types;
    std::set<std::string> constructors;
    for (std::size_t i = 0; i < m.decls.size(); ++i) {
      const auto& d = m.decls[i];
      if (d.is_fun()) {
        const auto& f = d.fun();
        if (!values.insert(f.name).second)
          throw ResolveError(ResolveErrorKind::DuplicateDefinition, m.name, f.name, "");
        const std::size_t arity = f.arity();
        for (const auto& eq : f.equations)
          if (eq.patterns.size() != arity)
            throw ResolveError(ResolveErrorKind::DuplicateDefinition, m.name, f.name,
                               "equations with different numbers of arguments");
        table.definitions[qualify(m.name, f.name)] =
            DefRef{m.name, f.name, i, std::nullopt, arity == 0 ? DefKind::Value : DefKind::Function};
      } else {
        const auto& dd = d.data();
        if (!types.insert(dd.name).second)
          throw ResolveError(ResolveErrorKind::DuplicateDefinition, m.name, dd.name, "type");
        for (const auto& c : dd.constructors) {
          if (!constructors.insert(c.name).second)
            throw ResolveError(ResolveErrorKind::DuplicateDefinition, m.name, c.name, "constructor");
          table.definitions[qualify(m.name, c.name)] = DefRef{m.name, c.name, i, std::nullopt, DefKind::Constructor};
        }
      }
    }
    if (m.exports) {
      std::set<std::string> seen;
      for (const auto& e : *m.exports) {
        if (!values.count(e) && !types.count(e))
          throw ResolveError(ResolveErrorKind::InvalidExport, m.name, e, "not declared in this module");
        if (!seen.insert(e).second)
          throw ResolveError(ResolveErrorKind::InvalidExport, m.name, e, "exported twice");
      }
    }
    std::set<std::string> seen_imports;
    for (const auto& i : m.imports) {
      if (!project.find(i)) throw ResolveError(ResolveErrorKind::UnknownModule, m.name, i, "imported");
      if (i == m.name) throw ResolveError(ResolveErrorKind::UnknownModule, m.name, i, "module imports itself");
      if (!seen_imports.insert(i).second)
        throw ResolveError(ResolveErrorKind::DuplicateDefinition, m.name, i, "imported twice");
    }
    table.imports[m.name] = m.imports;
  }

  for (const auto& [name, m] : project.modules) {
    auto& vals = table.visible_values[name];
    auto& cons = table.visible_constructors[name];
    auto add = [](std::vector<std::string>& v, const std::string& id) {
      if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
    };
    std::vector<const Module*> sources{&m};
    for (const auto& i : m.imports) sources.push_back(project.find(i));
    for (const Module* src : sources) {
      const bool own = src == &m;
      for (const auto& d : src->decls) {
        if (d.is_fun()) {
          if (own || exports_value(*src, d.fun().name)) add(vals[d.fun().name], qualify(src->name, d.fun().name));
        } else {
          for (const auto& c : d.data().constructors)
            if (own || exports_constructor(*src, c.name)) add(cons[c.name], qualify(src->name, c.name));
        }
      }
    }
  }
  return table;
}

const DefRef& lookup_in(const SymbolTable& table, const std::map<std::string, std::map<std::string, std::vector<std::string>>>& visible,
                        const std::string& module, const std::string& name, bool constructor) {
  const auto [q, n] = split_qualified(name);
  if (!q.empty()) {
    if (q != module) {
      const auto& imps = table.imports.at(module);
      if (std::find(imps.begin(), imps.end(), q) == imps.end())
        throw ResolveError(ResolveErrorKind::UnresolvedName, module, name, "module " + q + " is not imported");
    }
    // A qualified name sees the module's own top level or the import's exports.
    const auto& vis = visible.at(module);
    auto it = vis.find(n);
    const std::string id = qualify(q, n);
    if (it != vis.end() && std::find(it->second.begin(), it->second.end(), id) != it->second.end())
      return table.definitions.at(id);
    throw ResolveError(ResolveErrorKind::UnresolvedName, module, name, constructor ? "constructor" : "");
  }
  const auto& vis = visible.at(module);
  auto it = vis.find(n);
  if (it == vis.end() || it->second.empty())
    throw ResolveError(ResolveErrorKind::UnresolvedName, module, name, constructor ? "constructor" : "");
  if (it->second.size() > 1) {
    std::string detail = "could refer to";
    for (const auto& c : it->second) detail += " " + c;
    throw ResolveError(ResolveErrorKind::AmbiguousName, module, name, detail);
  }
  return table.definitions.at(it->second.front());
}

std::string spelled(const std::string& qualifier, const std::string& name) {
  return qualifier.empty() ? name : qualify(qualifier, name);
}

template <typename F>
void for_each_pcon(Pattern& p, F&& f) {
  if (auto* c = p.try_as<PCon>()) {
    f(*c);
    for (auto& a : c->args) for_each_pcon(a, f);
  }
  if (auto* t = p.try_as<PTuple>())
    for (auto& a : t->items) for_each_pcon(a, f);
}

template <typename F>
void for_each_pcon(const Pattern& p, F&& f) {
  if (const auto* c = p.try_as<PCon>()) {
    f(*c);
    for (const auto& a : c->args) for_each_pcon(a, f);
  }
  if (const auto* t = p.try_as<PTuple>())
    for (const auto& a : t->items) for_each_pcon(a, f);
}

void check_linear(const std::string& module, const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw ResolveError(ResolveErrorKind::DuplicateDefinition, module, n, "bound twice");
}

// Rewrites global references of one function declaration into pinned form.
void pin_fun_in(const SymbolTable& table, const std::string& module, FunDecl& f) {
  for (auto& eq : f.equations)
    for (auto& p : eq.patterns)
      for_each_pcon(p, [&](PCon& c) { c.qualifier = table.lookup_constructor(module, spelled(c.qualifier, c.name)).module; });
  walk_fun(module, f, [&](Expr& e, const Site& s) {
    if (auto* v = e.try_as<Var>()) {
      if (v->qualifier.empty() && s.scope->binds(v->name)) return Walk::Descend;
      v->qualifier = table.lookup(module, spelled(v->qualifier, v->name)).module;
    } else if (auto* c = e.try_as<Con>()) {
      c->qualifier = table.lookup_constructor(module, spelled(c->qualifier, c->name)).module;
    } else if (auto* k = e.try_as<Case>()) {
      for (auto& alt : k->alts)
        for_each_pcon(alt.pattern,
                      [&](PCon& c) { c.qualifier = table.lookup_constructor(module, spelled(c.qualifier, c.name)).module; });
    }
    return Walk::Descend;
  });
}

// Every (module, name) referenced from pinned module `m`, constructors flagged.
struct Reference {
  std::string module;
  std::string name;
  bool constructor;
};

std::vector<Reference> pinned_references(const Module& m) {
  std::vector<Reference> out;
  auto pcon = [&](const PCon& c) { out.push_back({c.qualifier, c.name, true}); };
  for (const auto& d : m.decls) {
    if (!d.is_fun()) continue;
    // Equation patterns come first in document order for each equation; the
    // exact interleaving does not matter to callers.
    for (const auto& eq : d.fun().equations)
      for (const auto& p : eq.patterns) for_each_pcon(p, pcon);
  }
  walk_module(m, [&](const Expr& e, const Site&) {
    if (const auto* v = e.try_as<Var>(); v && !v->qualifier.empty()) out.push_back({v->qualifier, v->name, false});
    if (const auto* c = e.try_as<Con>()) out.push_back({c->qualifier, c->name, true});
    if (const auto* k = e.try_as<Case>())
      for (const auto& alt : k->alts) for_each_pcon(alt.pattern, pcon);
    return Walk::Descend;
  });
  return out;
}

std::vector<std::string> referenced_modules_ordered(const Module& pinned) {
  std::vector<std::string> out;
  // Walk in true document order so that new imports are listed by first use.
  auto note = [&](const std::string& q) {
    if (!q.empty() && q != pinned.name && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  };
  for (const auto& d : pinned.decls) {
    if (!d.is_fun()) continue;
    const auto& f = d.fun();
    for (const auto& eq : f.equations) {
      for (const auto& p : eq.patterns) for_each_pcon(p, [&](const PCon& c) { note(c.qualifier); });
      FunDecl one{f.name, {eq}};
      walk_fun(pinned.name, one, [&](const Expr& e, const Site&) {
        if (const auto* v = e.try_as<Var>()) note(v->qualifier);
        if (const auto* c = e.try_as<Con>()) note(c->qualifier);
        if (const auto* k = e.try_as<Case>())
          for (const auto& alt : k->alts) for_each_pcon(alt.pattern, [&](const PCon& c) { note(c.qualifier); });
        return Walk::Descend;
      });
    }
  }
  return out;
}

template <typename P>
auto* deref_impl(P& project, const OccRef& ref) {
  auto* m = project.find(ref.module);
  using ExprPtr = decltype(&m->decls.front().fun().equations.front().rhs);
  if (!m || ref.path.size() < 2) return ExprPtr{nullptr};
  auto* f = m->find_fun(ref.decl);
  if (!f || ref.path[0] >= f->equations.size()) return ExprPtr{nullptr};
  auto& eq = f->equations[ref.path[0]];
  ExprPtr cur = nullptr;
  if (ref.path[1] == 0) {
    cur = &eq.rhs;
  } else if (ref.path[1] - 1 < eq.locals.size()) {
    cur = &eq.locals[ref.path[1] - 1].body;
  } else {
    return ExprPtr{nullptr};
  }
  for (std::size_t k = 2; k < ref.path.size() && cur; ++k) {
    const std::size_t i = ref.path[k];
    auto& e = *cur;
    cur = nullptr;
    if (auto* a = e.template try_as<App>()) {
      if (i == 0) cur = a->fn.get();
      if (i == 1) cur = a->arg.get();
    } else if (auto* x = e.template try_as<Infix>()) {
      if (i == 0) cur = x->lhs.get();
      if (i == 1) cur = x->rhs.get();
    } else if (auto* t = e.template try_as<Tuple>()) {
      if (i < t->items.size()) cur = &t->items[i];
    } else if (auto* c = e.template try_as<Case>()) {
      if (i == 0) cur = c->scrutinee.get();
      else if (i - 1 < c->alts.size()) cur = &c->alts[i - 1].body;
    } else if (auto* l = e.template try_as<Let>()) {
      if (i < l->defs.size()) cur = &l->defs[i].body;
      else if (i == l->defs.size()) cur = l->body.get();
    }
  }
  return cur;
}

}  // namespace

const DefRef& SymbolTable::lookup(const std::string& module, const std::string& name) const {
  return lookup_in(*this, visible_values, module, name, false);
}

const DefRef& SymbolTable::lookup_constructor(const std::string& module, const std::string& name) const {
  return lookup_in(*this, visible_constructors, module, name, true);
}

SymbolTable resolve_project(const Project& project) {
  SymbolTable table = build_table(project);
  for (const auto& [name, m] : project.modules) {
    for (std::size_t i = 0; i < m.decls.size(); ++i) {
      if (!m.decls[i].is_fun()) continue;
      const auto& f = m.decls[i].fun();
      for (const auto& eq : f.equations) {
        std::vector<std::string> bound;
        for (const auto& p : eq.patterns) pattern_vars(p, bound);
        check_linear(name, bound);
        std::vector<std::string> locals;
        for (const auto& d : eq.locals) {
          locals.push_back(d.name);
          check_linear(name, d.params);
          table.definitions[qualify(name, f.name) + "/" + d.name] =
              DefRef{name, f.name, i, d.name, DefKind::Local};
        }
        check_linear(name, locals);
      }
    }
    walk_module(m, [&](const Expr& e, const Site& s) {
      if (const auto* v = e.try_as<Var>()) {
        if (!(v->qualifier.empty() && s.scope->binds(v->name))) table.lookup(name, spelled(v->qualifier, v->name));
      } else if (const auto* c = e.try_as<Con>()) {
        table.lookup_constructor(name, spelled(c->qualifier, c->name));
      } else if (const auto* k = e.try_as<Case>()) {
        for (const auto& alt : k->alts) {
          check_linear(name, pattern_vars(alt.pattern));
          for_each_pcon(alt.pattern, [&](const PCon& c) { table.lookup_constructor(name, spelled(c.qualifier, c.name)); });
        }
      } else if (const auto* l = e.try_as<Let>()) {
        std::vector<std::string> names;
        for (const auto& d : l->defs) {
          names.push_back(d.name);
          check_linear(name, d.params);
        }
        check_linear(name, names);
      }
      return Walk::Descend;
    });
    for (const auto& d : m.decls)
      if (d.is_fun())
        for (const auto& eq : d.fun().equations)
          for (const auto& p : eq.patterns)
            for_each_pcon(p, [&](const PCon& c) { table.lookup_constructor(name, spelled(c.qualifier, c.name)); });
  }
  return table;
}

const Expr* deref(const Project& project, const OccRef& ref) { return deref_impl(project, ref); }
Expr* deref(Project& project, const OccRef& ref) { return deref_impl(project, ref); }

std::vector<OccRef> occurrences_of(const Project& project, const std::string& module, const std::string& name) {
  const Module* home = project.find(module);
  const bool is_con = is_constructor_name(name);
  if (!home || (is_con ? !home->find_constructor(name) : !home->find_fun(name)))
    throw ResolveError(ResolveErrorKind::UnresolvedName, module, name, "no such top-level definition");
  const Project pinned = pin(project);
  std::vector<OccRef> out;
  walk_project(pinned, [&](const Expr& e, const Site& s) {
    bool hit = false;
    if (const auto* v = e.try_as<Var>()) hit = !is_con && v->qualifier == module && v->name == name;
    if (const auto* c = e.try_as<Con>()) hit = is_con && c->qualifier == module && c->name == name;
    if (hit) out.push_back(OccRef{*s.module, *s.decl, *s.path});
    return Walk::Descend;
  });
  return out;
}

OccRef find_application(const Project& project, const std::string& module, const std::string& fn,
                        std::size_t arg_count) {
  const Module* m = project.find(module);
  if (!m) throw NoSuchApplication("no module " + module);
  if (arg_count == 0) throw NoSuchApplication("an application has at least one argument");
  const Project pinned = pin(project);
  const SymbolTable table = build_table(project);
  std::string target;
  try {
    target = table.lookup(module, fn).module;
  } catch (const ResolveError&) {
    throw NoSuchApplication(fn + " does not resolve in module " + module);
  }
  const std::string target_name = split_qualified(fn).second;
  std::set<const Expr*> inner;
  std::optional<OccRef> found;
  walk_module(*pinned.find(module), [&](const Expr& e, const Site& s) {
    if (!e.is<App>() || inner.count(&e)) return Walk::Descend;
    const Expr* cur = e.as<App>().fn.get();
    while (const auto* a = cur->try_as<App>()) {
      inner.insert(cur);
      cur = a->fn.get();
    }
    const Spine sp = spine_of(e);
    const auto* head = sp.head->try_as<Var>();
    if (head && head->qualifier == target && head->name == target_name && sp.args.size() == arg_count) {
      found = OccRef{*s.module, *s.decl, *s.path};
      return Walk::Stop;
    }
    return Walk::Descend;
  });
  if (!found)
    throw NoSuchApplication("no application of " + fn + " to " + std::to_string(arg_count) + " arguments in " + module);
  return *found;
}

std::vector<std::string> unused_imports(const Project& project, const std::string& module) {
  const Module* m = project.find(module);
  if (!m) throw ResolveError(ResolveErrorKind::UnknownModule, module, module, "");
  const SymbolTable table = build_table(project);
  Module pinned = *m;
  for (auto& d : pinned.decls)
    if (d.is_fun()) pin_fun_in(table, module, d.fun());
  std::set<std::string> used;
  for (const auto& r : pinned_references(pinned)) used.insert(r.module);
  std::vector<std::string> out;
  for (const auto& i : m->imports)
    if (!used.count(i)) out.push_back(i);
  return out;
}

Project pin(const Project& project) {
  const SymbolTable table = build_table(project);
  Project out = project;
  for (auto& [name, m] : out.modules)
    for (auto& d : m.decls)
      if (d.is_fun()) pin_fun_in(table, name, d.fun());
  return out;
}

Expr pin_expr(const Project& project, const std::string& module, const Expr& e) {
  const SymbolTable table = build_table(project);
  FunDecl holder{"", {Equation{{}, e, {}}}};
  pin_fun_in(table, module, holder);
  return holder.equations.front().rhs;
}

FunDecl pin_fun(const Project& project, const std::string& module, const FunDecl& f) {
  const SymbolTable table = build_table(project);
  FunDecl out = f;
  pin_fun_in(table, module, out);
  return out;
}

std::vector<std::string> referenced_modules(const Module& pinned) { return referenced_modules_ordered(pinned); }

Project unpin(Project pinned) {
  // Imports: keep the existing ones, append newly needed ones by first use.
  for (auto& [name, m] : pinned.modules)
    for (const auto& q : referenced_modules_ordered(m))
      if (!m.imports_module(q)) m.imports.push_back(q);

  // Exports: anything referenced from another module must be exported.
  for (auto& [name, m] : pinned.modules) {
    for (const auto& r : pinned_references(m)) {
      if (r.module == name) continue;
      Module* home = pinned.find(r.module);
      if (!home || !home->exports) continue;
      std::string entry = r.name;
      if (r.constructor) {
        const DataDecl* type = type_of_constructor(*home, r.name);
        if (!type) continue;
        entry = type->name;
      }
      auto& ex = *home->exports;
      if (std::find(ex.begin(), ex.end(), entry) == ex.end()) ex.push_back(entry);
    }
  }

  const SymbolTable table = build_table(pinned);
  for (auto& [name, m] : pinned.modules) {
    const auto& vals = table.visible_values.at(name);
    const auto& cons = table.visible_constructors.at(name);
    auto unique_in = [](const std::map<std::string, std::vector<std::string>>& vis, const std::string& q,
                        const std::string& n) {
      auto it = vis.find(n);
      return it != vis.end() && it->second.size() == 1 && it->second.front() == qualify(q, n);
    };
    auto spell_pcon = [&](PCon& c) {
      if (!c.qualifier.empty() && unique_in(cons, c.qualifier, c.name)) c.qualifier.clear();
    };
    for (auto& d : m.decls) {
      if (!d.is_fun()) continue;
      for (auto& eq : d.fun().equations)
        for (auto& p : eq.patterns) for_each_pcon(p, spell_pcon);
    }
    walk_module(m, [&](Expr& e, const Site& s) {
      if (auto* v = e.try_as<Var>()) {
        if (!v->qualifier.empty() && !s.scope->binds(v->name) && unique_in(vals, v->qualifier, v->name))
          v->qualifier.clear();
      } else if (auto* c = e.try_as<Con>()) {
        if (!c->qualifier.empty() && unique_in(cons, c->qualifier, c->name)) c->qualifier.clear();
      } else if (auto* k = e.try_as<Case>()) {
        for (auto& alt : k->alts) for_each_pcon(alt.pattern, spell_pcon);
      }
      return Walk::Descend;
    });
  }
  return pinned;
}

std::optional<std::vector<std::string>> find_import_cycle(const Project& project) {
  std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    state[n] = 1;
    stack.push_back(n);
    if (const Module* m = project.find(n)) {
      for (const auto& i : m->imports) {
        if (cycle) return;
        if (state[i] == 1) {
          auto it = std::find(stack.begin(), stack.end(), i);
          cycle = std::vector<std::string>(it, stack.end());
          cycle->push_back(i);
          return;
        }
        if (state[i] == 0) visit(i);
      }
    }
    stack.pop_back();
    state[n] = 2;
  };
  for (const auto& [name, m] : project.modules) {
    if (cycle) break;
    if (state[name] == 0) visit(name);
  }
  return cycle;
}

}  // namespace viewshift
