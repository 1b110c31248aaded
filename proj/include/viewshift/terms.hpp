#pragma once

#include <map>
#include <set>
#include <string>

#include "viewshift/ast.hpp"

namespace viewshift {

/// Names occurring free in `e`. Qualified references are reported as `M.x`;
/// they can never be captured by a local binder.
std::set<std::string> free_vars(const Expr& e);

/// Free unqualified variables only (the ones a local binder could capture).
std::set<std::string> free_locals(const Expr& e);

/// Every unqualified name mentioned in `e`, bound or free (binders included).
std::set<std::string> all_local_names(const Expr& e);

/// Capture-avoiding substitution of the unqualified variable `name`.
/// Binders that would capture a free variable of `replacement` are renamed
/// with primes (`y` -> `y'`).
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

/// Simultaneous capture-avoiding substitution.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst);

/// `<base>_gen`, else `<base>_gen_1`, `<base>_gen_2`, ... first not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// `<base>'`, `<base>''`, ... first not in `avoid`.
std::string fresh_prime(const std::string& base, const std::set<std::string>& avoid);

/// Pairs of qualified names treated as the same binder by alpha_eq, e.g. the
/// recursive self-reference of two declarations under comparison.
using GlobalRenaming = std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>>;

bool alpha_eq(const Expr& a, const Expr& b);
bool alpha_eq(const Expr& a, const Expr& b, const GlobalRenaming& globals);

/// True iff the declarations differ only in the names of bound variables.
/// A function's own name counts as bound (its recursive references follow it).
bool alpha_eq(const TopDecl& a, const TopDecl& b);
bool alpha_eq(const FunDecl& a, const FunDecl& b, const GlobalRenaming& globals = {});

/// Project-level alpha-equivalence: module by module, declaration order and
/// comments ignored, imports and exports compared as sets, and free names
/// compared by the definition they resolve to rather than by spelling.
/// Projects that fail to resolve are never equivalent.
bool alpha_eq_project(const Project& a, const Project& b);

/// Explanation of the first difference found by alpha_eq_project (empty when equivalent).
std::string alpha_diff_project(const Project& a, const Project& b);

}  // namespace viewshift
