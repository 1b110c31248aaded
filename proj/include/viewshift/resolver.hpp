#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/errors.hpp"

namespace viewshift {

enum class DefKind { Function, Value, Constructor, Local };

/// Where a name is defined: a top-level declaration (or a constructor of a
/// data declaration), optionally narrowed to one of its where-locals.
struct DefRef {
  std::string module;
  std::string name;
  std::size_t decl_index = 0;
  std::optional<std::string> local;
  DefKind kind = DefKind::Function;
  bool operator==(const DefRef&) const = default;
};

/// Every definition of a project keyed by qualified identifier: `M.f` for
/// top-level bindings and constructors, `M.f/d` for where-locals of `f`.
class SymbolTable {
public:
  std::map<std::string, DefRef> definitions;

  /// Resolves `name` (plain or `M.x`) as written at the top level of `module`.
  /// Throws ResolveError when the name is unbound or ambiguous there.
  const DefRef& lookup(const std::string& module, const std::string& name) const;

  /// Same for a constructor name.
  const DefRef& lookup_constructor(const std::string& module, const std::string& name) const;

  // Unqualified visibility per module: name -> candidate definitions.
  std::map<std::string, std::map<std::string, std::vector<std::string>>> visible_values;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> visible_constructors;
  std::map<std::string, std::vector<std::string>> imports;
};

/// Builds the symbol table and checks that every reference in the project
/// resolves to exactly one definition.
SymbolTable resolve_project(const Project& project);

/// Position of an expression node: module, enclosing top-level declaration and
/// the child-index path from the declaration root.
///
/// Path layout: [equation, slot, child...] where slot 0 is the right-hand side
/// and slot 1+j the body of where-local j. Children: App {fn, arg},
/// Infix {lhs, rhs}, Tuple {items...}, Case {scrutinee, alt bodies...},
/// Let {binding bodies..., body}.
struct OccRef {
  std::string module;
  std::string decl;
  std::vector<std::size_t> path;
  bool operator==(const OccRef&) const = default;
  auto operator<=>(const OccRef&) const = default;
};

const Expr* deref(const Project& project, const OccRef& ref);
Expr* deref(Project& project, const OccRef& ref);

/// Occurrences referring to the top-level definition `name` of `module`, in
/// document order per module, modules in name order. Shadowed occurrences are
/// not reported. Throws ResolveError(UnresolvedName) if there is no such definition.
std::vector<OccRef> occurrences_of(const Project& project, const std::string& module, const std::string& name);

class NoSuchApplication : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// First application node (document order) in `module` whose head resolves to
/// `fn` and which has exactly `arg_count` arguments.
OccRef find_application(const Project& project, const std::string& module, const std::string& fn,
                        std::size_t arg_count);

/// Imports of `module` from which nothing is referenced.
std::vector<std::string> unused_imports(const Project& project, const std::string& module);

// ---------------------------------------------------------------------------
// Pinned form. Every reference to a top-level definition or constructor gets
// its defining module as qualifier, so code can be moved between scopes
// without changing meaning; unqualified variables are exactly the locals.

Project pin(const Project& project);

/// Pins a free-standing expression as if written at the top level of `module`.
Expr pin_expr(const Project& project, const std::string& module, const Expr& e);
FunDecl pin_fun(const Project& project, const std::string& module, const FunDecl& f);

/// Modules other than itself that a pinned module refers to, by first use.
std::vector<std::string> referenced_modules(const Module& pinned);

/// Inverse of pin: adds the imports and exports the references need, then
/// spells each reference with the least qualification that still resolves to
/// the same definition.
Project unpin(Project pinned);

/// A cycle in the import graph, if any (first module repeated at the end).
std::optional<std::vector<std::string>> find_import_cycle(const Project& project);

}  // namespace viewshift
