#pragma once

#include <string>
#include <string_view>

#include "viewshift/ast.hpp"
#include "viewshift/errors.hpp"

namespace viewshift {

// Concrete syntax of the object language.
//
//   module M (f, T) where        -- export list optional
//   import N
//   data T = A Int | B (T, T)
//   f (A i) = g i
//       where
//           g x = x + 1
//   v = case (x, y) of { (p, q) -> p; _ -> 0 }
//   w = let a = 1; b = 2 in a * b
//
// Top-level declarations start in column 1; continuation lines are indented.
// A contiguous block of `--` lines directly above a declaration is attached to it.

/// Parses one module. Throws SyntaxError (with line/column) on malformed input
/// or when two top-level declarations bind the same identifier.
Module parse_module(std::string_view source);

/// Parses a single declaration (used for comment blocks holding a copy of a declaration).
TopDecl parse_decl(std::string_view source);

Expr parse_expr(std::string_view source);

/// Canonical text: 4-space where-indent, one blank line between declarations,
/// minimal parentheses. parse_module(render_module(m)) == m.
std::string render_module(const Module& module);

/// Renders a declaration (without its comment block) in canonical layout.
std::string render_decl(const TopDecl& decl);
std::string render_fun(const FunDecl& fun);
std::string render_expr(const Expr& expr);
std::string render_pattern(const Pattern& pattern);
std::string render_equation(const std::string& name, const Equation& eq);

}  // namespace viewshift
