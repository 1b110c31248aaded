#include <algorithm>
#include <sstream>

#include "common.hpp"
#include "viewshift/syntax.hpp"
#include "viewshift/terms.hpp"
#include "viewshift/walk.hpp"

namespace viewshift {

using namespace refactor_detail;

namespace {

// Position of the tuple component bound to the same variable in every
// alternative, if it can be hoisted into a let without capture.
std::optional<std::pair<std::size_t, std::string>> common_position(const Case& c) {
  const auto* scrutinee = c.scrutinee->try_as<Tuple>();
  if (!scrutinee || c.alts.empty()) return std::nullopt;
  const std::size_t width = scrutinee->items.size();
  for (const auto& alt : c.alts) {
    const auto* t = alt.pattern.try_as<PTuple>();
    if (!t || t->items.size() != width) return std::nullopt;
  }
  for (std::size_t j = 0; j < width; ++j) {
    const auto* first = c.alts[0].pattern.as<PTuple>().items[j].try_as<PVar>();
    if (!first) continue;
    const bool shared = std::all_of(c.alts.begin(), c.alts.end(), [&](const Alt& a) {
      const auto* v = a.pattern.as<PTuple>().items[j].try_as<PVar>();
      return v && v->name == first->name;
    });
    if (!shared) continue;
    bool captures = false;
    for (const auto& item : scrutinee->items)
      if (free_locals(item).count(first->name)) captures = true;
    if (!captures) return std::make_pair(j, first->name);
  }
  return std::nullopt;
}

Expr hoist(Case c, std::size_t j, const std::string& y) {
  auto& items = c.scrutinee->as<Tuple>().items;
  Expr bound = items[j];
  items.erase(items.begin() + static_cast<std::ptrdiff_t>(j));
  for (auto& alt : c.alts) {
    auto& ps = alt.pattern.as<PTuple>().items;
    ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(j));
  }
  Expr body;
  if (items.empty()) {
    body = c.alts.front().body;
  } else if (items.size() == 1) {
    Case single;
    single.scrutinee = items.front();
    for (auto& alt : c.alts) single.alts.push_back(Alt{alt.pattern.as<PTuple>().items.front(), std::move(alt.body)});
    body = Expr(std::move(single));
  } else {
    body = Expr(std::move(c));
  }
  return Let{{LocalDef{y, {}, std::move(bound)}}, std::move(body)};
}

std::vector<std::string> comment_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

Project simplify_case_pattern(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "simplify-case-pattern";
  return transform(p, op, [&](Project& q) {
    FunDecl& fd = fun_of(module_of(q, module, op), f, op);
    bool done = false;
    walk_fun(module, fd, [&](Expr& e, const Site&) {
      auto* c = e.try_as<Case>();
      if (!c) return Walk::Descend;
      auto pos = common_position(*c);
      if (!pos) return Walk::Descend;
      e = hoist(std::move(*c), pos->first, pos->second);
      done = true;
      return Walk::Stop;
    });
    if (!done)
      fail(RefactorErrorKind::NotApplicable, op,
           "no case in " + f + " binds the same variable at one tuple position in every alternative");
  });
}

Project case_to_eq(const Project& p, const std::string& f, const std::string& module, std::size_t arity) {
  const std::string op = arity == 2 ? "case-to-eq2" : "case-to-eq";
  if (arity != 1 && arity != 2) fail(RefactorErrorKind::NotApplicable, op, "matched arity must be 1 or 2");
  return transform(p, op, [&](Project& q) {
    FunDecl& fd = fun_of(module_of(q, module, op), f, op);
    if (fd.equations.size() != 1) fail(RefactorErrorKind::NotApplicable, op, f + " must have a single equation");
    const Equation eq = fd.equations.front();
    if (!eq.locals.empty()) fail(RefactorErrorKind::NotApplicable, op, f + " has where-locals");
    const auto* c = eq.rhs.try_as<Case>();
    if (!c) fail(RefactorErrorKind::NotApplicable, op, "the body of " + f + " is not a case expression");

    std::vector<const Expr*> scrutinees;
    if (arity == 1) {
      scrutinees.push_back(c->scrutinee.get());
    } else if (const auto* t = c->scrutinee->try_as<Tuple>(); t && t->items.size() == 2) {
      for (const auto& item : t->items) scrutinees.push_back(&item);
    } else {
      fail(RefactorErrorKind::NotApplicable, op, "the case in " + f + " is not over a pair");
    }
    // Parameter position of each scrutinee component.
    std::vector<std::size_t> slots;
    std::set<std::string> params;
    for (const auto& pat : eq.patterns)
      if (const auto* v = pat.try_as<PVar>()) params.insert(v->name);
    for (const Expr* s : scrutinees) {
      const auto* v = s->try_as<Var>();
      std::optional<std::size_t> slot;
      for (std::size_t i = 0; v && v->qualifier.empty() && i < eq.patterns.size(); ++i)
        if (const auto* pv = eq.patterns[i].try_as<PVar>(); pv && pv->name == v->name) slot = i;
      if (!slot || std::find(slots.begin(), slots.end(), *slot) != slots.end())
        fail(RefactorErrorKind::NotApplicable, op, "the case scrutinee is not made of parameters of " + f);
      slots.push_back(*slot);
    }

    std::vector<Equation> out;
    for (const auto& alt : c->alts) {
      std::vector<Pattern> parts;
      if (arity == 1) {
        parts.push_back(alt.pattern);
      } else if (const auto* t = alt.pattern.try_as<PTuple>(); t && t->items.size() == 2) {
        parts = t->items;
      } else if (alt.pattern.is<PWild>()) {
        parts = {PWild{}, PWild{}};
      } else {
        fail(RefactorErrorKind::NotApplicable, op, "alternative " + render_pattern(alt.pattern) + " does not split");
      }
      Equation e{eq.patterns, alt.body, {}};
      std::set<std::string> replaced;
      for (std::size_t k = 0; k < slots.size(); ++k) replaced.insert(eq.patterns[slots[k]].as<PVar>().name);
      for (const auto& part : parts)
        for (const auto& v : pattern_vars(part))
          if (params.count(v) && !replaced.count(v))
            fail(RefactorErrorKind::NotApplicable, op, "alternative variable " + v + " shadows a parameter of " + f);
      for (std::size_t k = 0; k < slots.size(); ++k) {
        const std::string& x = eq.patterns[slots[k]].as<PVar>().name;
        Pattern part = parts[k];
        if (free_locals(e.rhs).count(x)) {
          if (part.is<PWild>()) {
            part = pvar(x);
          } else if (const auto* pv = part.try_as<PVar>()) {
            e.rhs = substitute(e.rhs, x, var(pv->name));
          } else {
            fail(RefactorErrorKind::NotApplicable, op,
                 "alternative " + render_pattern(alt.pattern) + " still uses the scrutinised parameter " + x);
          }
        }
        e.patterns[slots[k]] = std::move(part);
      }
      out.push_back(std::move(e));
    }
    fd.equations = std::move(out);
  });
}

Project duplicate_into_comment(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "duplicate-into-comment";
  const Module* original = p.find(module);
  if (!original) fail(RefactorErrorKind::NotFound, op, "no module " + module);
  const std::size_t at = decl_index(*original, f, op);
  // Rendered from the input so the copy keeps the spelling the user sees.
  const auto lines = comment_lines(render_decl(original->decls[at]));
  return transform(p, op, [&](Project& q) { module_of(q, module, op).decls[at].comment = lines; });
}

Project rm_comment_before(const Project& p, const std::string& f, const std::string& module) {
  const std::string op = "rm-comment-before";
  return transform(p, op, [&](Project& q) {
    Module& mod = module_of(q, module, op);
    auto& decl = mod.decls[decl_index(mod, f, op)];
    if (decl.comment.empty()) fail(RefactorErrorKind::NotFound, op, f + " has no comment");
    decl.comment.clear();
  });
}

}  // namespace viewshift
