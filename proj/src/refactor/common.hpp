#pragma once

// Shared machinery of the refactoring operations. Operations run on the
// pinned form of the project (see resolver.hpp): global references carry
// their defining module, so rewrites never have to reason about spelling.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/refactor.hpp"
#include "viewshift/resolver.hpp"

namespace viewshift::refactor_detail {

[[noreturn]] void fail(RefactorErrorKind kind, const std::string& op, const std::string& message);

/// pin -> body -> unpin -> import-cycle check -> re-resolution.
Project transform(const Project& input, const std::string& op, const std::function<void(Project&)>& body);

Module& module_of(Project& p, const std::string& module, const std::string& op);
FunDecl& fun_of(Module& m, const std::string& f, const std::string& op);
std::size_t decl_index(const Module& m, const std::string& f, const std::string& op);

/// Pinned reference for `name` as written at the top level of `module`
/// (NotFound when it does not resolve).
Var resolve_global(const Project& p, const std::string& module, const std::string& name, const std::string& op);

/// Every identifier mentioned in an equation or declaration: binders, locals
/// and the base names of global references.
std::set<std::string> names_in(const Equation& eq);
std::set<std::string> names_in(const FunDecl& f);

/// Index of the first equation whose first constructor pattern is `constructor`.
std::optional<std::size_t> equation_for_constructor(const FunDecl& f, const std::string& constructor);

/// Child `index` of a node under the OccRef path layout, or nullptr.
Expr* child_of(Expr& e, std::size_t index);

/// Nodes from the slot root down to the node addressed by `path` ([eq, slot, ...]).
std::vector<Expr*> nodes_on_path(FunDecl& f, const std::vector<std::size_t>& path);

/// Replaces every reference to global `from` by `to` across the project.
void retarget(Project& pinned, const Var& from, const Var& to);

/// First reference to global `target` outside declaration `except` of `except_module`.
std::optional<OccRef> first_reference(const Project& pinned, const Var& target, const std::string& except_module,
                                      const std::string& except_decl);

void prune_export(Module& m, const std::string& name);

std::string describe(const OccRef& ref);

/// Body of an equation with its where-locals turned into an enclosing let.
Expr with_locals(const Equation& eq);

/// Replacement for `d a1 .. ak`: beta-reduction for a single equation with
/// variable patterns, otherwise a case over the arguments. Arguments beyond
/// the arity stay applied. NotApplicable for partial applications.
Expr unfold_call(const FunDecl& d, const std::vector<Expr>& args, const std::string& op);

/// Second-order matching of a declaration body whose parameters act as
/// metavariables; used by fold and generative fold.
struct FoldPattern {
  Var head;
  std::vector<std::string> params;
  Expr body;
};

/// Replaces instances of `pattern` in `e` (outermost first, then inside the
/// arguments of each replacement). With `use_aliases`, variables bound to
/// closed expressions by tuple-case patterns or lets match those expressions.
std::size_t fold_instances(Expr& e, const FoldPattern& pattern, bool use_aliases);

}  // namespace viewshift::refactor_detail
