#include "viewshift/ast.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "viewshift/errors.hpp"

namespace viewshift {

FunDecl* Module::find_fun(const std::string& n) {
  for (auto& d : decls)
    if (d.is_fun() && d.fun().name == n) return &d.fun();
  return nullptr;
}

const FunDecl* Module::find_fun(const std::string& n) const {
  for (const auto& d : decls)
    if (d.is_fun() && d.fun().name == n) return &d.fun();
  return nullptr;
}

std::optional<std::size_t> Module::index_of(const std::string& n) const {
  for (std::size_t i = 0; i < decls.size(); ++i)
    if (decls[i].is_fun() && decls[i].fun().name == n) return i;
  return std::nullopt;
}

const ConstructorDef* Module::find_constructor(const std::string& n) const {
  for (const auto& d : decls) {
    if (!d.is_data()) continue;
    for (const auto& c : d.data().constructors)
      if (c.name == n) return &c;
  }
  return nullptr;
}

bool Module::imports_module(const std::string& m) const {
  return std::find(imports.begin(), imports.end(), m) != imports.end();
}

Module* Project::find(const std::string& m) {
  auto it = modules.find(m);
  return it == modules.end() ? nullptr : &it->second;
}

const Module* Project::find(const std::string& m) const {
  auto it = modules.find(m);
  return it == modules.end() ? nullptr : &it->second;
}

Expr apply(Expr fn, std::vector<Expr> args) {
  for (auto& a : args) fn = app(std::move(fn), std::move(a));
  return fn;
}

Spine spine_of(const Expr& e) {
  Spine s;
  const Expr* cur = &e;
  while (const auto* a = cur->try_as<App>()) {
    s.args.push_back(a->arg.get());
    cur = a->fn.get();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

bool is_keyword(const std::string& s) {
  static constexpr std::array<const char*, 9> keywords = {
      "module", "where", "import", "data", "case", "of", "let", "in", "show"};
  if (s == "print") return true;
  return std::any_of(keywords.begin(), keywords.end(), [&](const char* k) { return s == k; });
}

bool is_constructor_name(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

bool is_variable_name(const std::string& s) {
  if (s.empty() || s == "_") return false;
  const auto c0 = static_cast<unsigned char>(s[0]);
  if (!(std::islower(c0) || c0 == '_')) return false;
  if (is_keyword(s)) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

const char* to_string(ResolveErrorKind kind) {
  switch (kind) {
    case ResolveErrorKind::DuplicateDefinition: return "DuplicateDefinition";
    case ResolveErrorKind::UnresolvedName: return "UnresolvedName";
    case ResolveErrorKind::AmbiguousName: return "AmbiguousName";
    case ResolveErrorKind::UnknownModule: return "UnknownModule";
    case ResolveErrorKind::InvalidExport: return "InvalidExport";
  }
  return "ResolveError";
}

}  // namespace viewshift
