#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "viewshift/ast.hpp"

namespace viewshift {

enum class RefactorErrorKind {
  NameClash,
  NotFound,
  NotApplicable,
  StillUsed,
  PreconditionFailed,
  ImportCycle,
  NoSuchApplication,
};

const char* to_string(RefactorErrorKind kind);

/// A refused refactoring. Operations never modify their input, so the caller
/// still holds the unchanged project when this is thrown.
class RefactorError : public std::runtime_error {
public:
  RefactorError(RefactorErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}
  RefactorErrorKind kind() const { return kind_; }

private:
  RefactorErrorKind kind_;
};

enum class GeneraliseMode { OtherType, RecType };

// Every operation takes the whole project and returns the rewritten project.
// Names may be given plain or module-qualified where a reference is expected.
// Results are re-resolved; references are spelled with the least
// qualification that keeps them unambiguous, and imports/exports the new code
// needs are added.

/// Moves the right-hand side of the equation of `f` whose first constructor
/// pattern is `constructor` into a new where-local `name`.
Project exhibit_function(const Project& p, const std::string& f, const std::string& constructor,
                         const std::string& name, const std::string& module);

/// Replaces the first application of `f` to `arg_count` arguments in `module`
/// by a new where-local `name` of the enclosing equation.
Project new_def_fun_app(const Project& p, const std::string& f, std::size_t arg_count, const std::string& name,
                        const std::string& module);

/// Abstracts, inside where-local `local` of the `constructor` equation of `f`,
/// either the `index`-th (1-based) constructor argument (OtherType) or the
/// recursive call of `f` on it (RecType) into a new first parameter `param`.
Project generalise(const Project& p, const std::string& f, const std::string& constructor, const std::string& local,
                   const std::string& module, std::size_t index, const std::string& param, ArgShape shape,
                   GeneraliseMode mode);

/// Abstracts the global `ident` used by `f` into a new first parameter.
/// Call sites in `module` pass `ident`; call sites elsewhere pass a fresh
/// top-level alias `<f>_gen...` defined next to `f`.
Project generalise_ident(const Project& p, const std::string& f, const std::string& module, const std::string& ident,
                         const std::string& param);

/// Lifts where-local `local` of `f` to the top level of `module`, passing the
/// enclosing equation's variables it uses as extra leading parameters.
Project lift_to_top(const Project& p, const std::string& f, const std::string& local, const std::string& module);

Project rename_top_level(const Project& p, const std::string& f, const std::string& module, const std::string& new_name);

/// Moves a top-level declaration; `to` is created when it does not exist yet.
Project move_def(const Project& p, const std::string& f, const std::string& from, const std::string& to);

/// Inlines the first occurrence of `name` inside the declaration of `f`.
Project unfold_instance(const Project& p, const std::string& name, const std::string& f, const std::string& module);

/// Replaces instances of the body of `f` anywhere else in the project by calls of `f`.
Project fold_top_level(const Project& p, const std::string& f, const std::string& module);

/// Unfolds the first application of `f` to `arg_count` arguments in `module`,
/// then folds against the declaration copy kept in the enclosing
/// declaration's comment.
Project generative_fold(const Project& p, const std::string& f, std::size_t arg_count, const std::string& module);

Project remove_def(const Project& p, const std::string& f, const std::string& module);

/// Removes an unused where-local or let binding `name` inside `f`.
Project remove_local_def(const Project& p, const std::string& name, const std::string& f, const std::string& module);

Project clean_imports(const Project& p, const std::string& module);

Project rm_from_exports(const Project& p, const std::string& f, const std::string& module);

/// `case (.., e, ..) of { (.., y, ..) -> b; ... }` with the same `y` in every
/// alternative becomes `let y = e in case (..) of { (..) -> b; ... }`.
Project simplify_case_pattern(const Project& p, const std::string& f, const std::string& module);

/// Turns a body `case x of { p -> e; ... }` (or `case (x, y) of` when
/// `arity` is 2) into one equation per alternative.
Project case_to_eq(const Project& p, const std::string& f, const std::string& module, std::size_t arity);

Project duplicate_into_comment(const Project& p, const std::string& f, const std::string& module);

Project rm_comment_before(const Project& p, const std::string& f, const std::string& module);

/// Replaces every use of `drop` by `keep` and removes `drop`; both must be
/// alpha-equivalent declarations of `module`.
Project unify_alpha(const Project& p, const std::string& keep, const std::string& drop, const std::string& module);

/// Deletes a module that declares nothing and is imported by no one.
Project remove_module(const Project& p, const std::string& module);

}  // namespace viewshift
