#include <algorithm>

#include "common.hpp"
#include "viewshift/syntax.hpp"
#include "viewshift/terms.hpp"
#include "viewshift/walk.hpp"

namespace viewshift {

using namespace refactor_detail;

namespace {

struct Hit {
  std::vector<std::size_t> path;
  std::optional<LocalDef> local;  // set when the occurrence names a local definition
};

// Index of the top of the application spine whose head is nodes.back().
std::size_t spine_top(const std::vector<Expr*>& nodes, const std::vector<std::size_t>& path) {
  std::size_t top = nodes.size() - 1;
  while (top > 0 && nodes[top - 1]->is<App>() && path[top + 1] == 0) --top;
  return top;
}

std::vector<Expr> spine_args(const Expr& e) {
  std::vector<Expr> args;
  for (const auto* a : spine_of(e).args) args.push_back(*a);
  return args;
}

}  // namespace

Project unfold_instance(const Project& p, const std::string& name, const std::string& f, const std::string& module) {
  const std::string op = "unfold-instance";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    FunDecl& fd = fun_of(mod, f, op);
    std::optional<Var> global;
    try {
      global = resolve_global(p, module, name, op);
    } catch (const RefactorError&) {
    }

    std::optional<Hit> hit;
    bool captured = false;
    walk_fun(module, fd, [&](const Expr& e, const Site& s) {
      const auto* v = e.try_as<Var>();
      if (!v) return Walk::Descend;
      if (v->qualifier.empty() && v->name == name) {
        const Binder* b = s.scope->lookup(name);
        if (!b || !b->def) return Walk::Descend;
        // Free locals of the definition must mean the same thing at the use site.
        std::set<std::string> fv = free_locals(b->def->body);
        for (const auto& prm : b->def->params) fv.erase(prm);
        const std::size_t end = s.scope->group_end(*b);
        for (const auto& n : fv)
          if (auto at = s.scope->position(n); at && *at > end) captured = true;
        hit = Hit{*s.path, *b->def};
        return Walk::Stop;
      }
      if (global && *v == *global) {
        hit = Hit{*s.path, std::nullopt};
        return Walk::Stop;
      }
      return Walk::Descend;
    });
    if (!hit) fail(RefactorErrorKind::NotFound, op, "no occurrence of " + name + " in " + f);
    if (captured)
      fail(RefactorErrorKind::PreconditionFailed, op,
           "the definition of " + name + " refers to a local that is shadowed at the occurrence");

    auto nodes = nodes_on_path(fd, hit->path);
    Expr& top = *nodes[spine_top(nodes, hit->path)];
    std::vector<Expr> args = spine_args(top);
    if (hit->local) {
      const LocalDef& d = *hit->local;
      if (args.size() < d.params.size())
        fail(RefactorErrorKind::NotApplicable, op,
             name + " takes " + std::to_string(d.params.size()) + " arguments but is applied to " +
                 std::to_string(args.size()));
      std::map<std::string, Expr> subst;
      for (std::size_t i = 0; i < d.params.size(); ++i) subst[d.params[i]] = args[i];
      std::vector<Expr> rest(args.begin() + static_cast<std::ptrdiff_t>(d.params.size()), args.end());
      top = apply(substitute(d.body, subst), std::move(rest));
      return;
    }
    const FunDecl* def = module_of(q, global->qualifier, op).find_fun(global->name);
    if (!def) fail(RefactorErrorKind::NotFound, op, name + " is not a function definition");
    const FunDecl copy = *def;
    top = unfold_call(copy, args, op);
  });
}

Project fold_top_level(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "fold-def";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    const FunDecl& fd = fun_of(mod, f, op);
    if (fd.equations.size() != 1) fail(RefactorErrorKind::NotApplicable, op, f + " must have a single equation");
    const Equation& eq = fd.equations.front();
    if (!eq.locals.empty()) fail(RefactorErrorKind::NotApplicable, op, f + " has where-locals");
    FoldPattern pattern{Var{module, f}, {}, eq.rhs};
    for (const auto& pat : eq.patterns) {
      const auto* v = pat.try_as<PVar>();
      if (!v) fail(RefactorErrorKind::NotApplicable, op, f + " must bind its parameters with variables");
      pattern.params.push_back(v->name);
    }
    if (const auto* v = eq.rhs.try_as<Var>(); v && v->qualifier.empty())
      fail(RefactorErrorKind::NotApplicable, op, "the body of " + f + " is a bare parameter and matches anything");

    std::size_t count = 0;
    for (auto& [name, m] : q.modules)
      for (auto& d : m.decls) {
        if (!d.is_fun() || (name == module && d.name() == f)) continue;
        for (auto& e : d.fun().equations) {
          count += fold_instances(e.rhs, pattern, false);
          for (auto& l : e.locals) count += fold_instances(l.body, pattern, false);
        }
      }
    if (count == 0) fail(RefactorErrorKind::NotApplicable, op, "no instance of the body of " + f + " found");
  });
}

Project generative_fold(const Project& p, const std::string& f, std::size_t arg_count, const std::string& module) {
  const std::string op = "generative-fold";
  if (!p.find(module)) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  OccRef at;
  try {
    at = find_application(p, module, f, arg_count);
  } catch (const NoSuchApplication& e) {
    fail(RefactorErrorKind::NotFound, op, e.what());
  } catch (const ResolveError& e) {
    fail(RefactorErrorKind::NotFound, op, e.what());
  }
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    TopDecl& enclosing = mod.decls[decl_index(mod, at.decl, op)];
    if (enclosing.comment.empty())
      fail(RefactorErrorKind::NotFound, op, at.decl + " has no comment holding a copy of a definition");

    std::string text;
    for (const auto& line : enclosing.comment) text += line + "\n";
    FunDecl saved;
    try {
      TopDecl d = parse_decl(text);
      if (!d.is_fun()) throw SyntaxError(1, 1, "not a function definition");
      saved = pin_fun(p, module, d.fun());
    } catch (const std::exception& e) {
      fail(RefactorErrorKind::NotFound, op, "the comment above " + at.decl + " is not a usable definition: " + e.what());
    }
    const FunDecl* current = mod.find_fun(saved.name);
    if (!current)
      fail(RefactorErrorKind::NotFound, op, "the commented definition " + saved.name + " is not defined in " + module);
    // Folding against anything but the current definition would not preserve meaning.
    if (!alpha_eq(saved, *current))
      fail(RefactorErrorKind::PreconditionFailed, op,
           "the comment above " + at.decl + " is not a copy of the current definition of " + saved.name);
    if (saved.equations.size() != 1 || !saved.equations[0].locals.empty())
      fail(RefactorErrorKind::NotApplicable, op, "the commented definition must be a single equation without locals");
    FoldPattern pattern{Var{module, saved.name}, {}, saved.equations[0].rhs};
    for (const auto& pat : saved.equations[0].patterns) {
      const auto* v = pat.try_as<PVar>();
      if (!v) fail(RefactorErrorKind::NotApplicable, op, "the commented definition must take variable parameters");
      pattern.params.push_back(v->name);
    }

    auto nodes = nodes_on_path(enclosing.fun(), at.path);
    Expr& node = *nodes.back();
    const Var head = spine_of(node).head->as<Var>();
    const FunDecl callee = *module_of(q, head.qualifier, op).find_fun(head.name);
    node = unfold_call(callee, spine_args(node), op);
    if (fold_instances(node, pattern, true) == 0)
      fail(RefactorErrorKind::NotApplicable, op, "nothing in the unfolded " + f + " folds back into " + saved.name);
  });
}

}  // namespace viewshift
