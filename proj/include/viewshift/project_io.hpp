#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "viewshift/ast.hpp"

namespace viewshift {

/// Parses a set of module sources keyed by file name (`<Module>.mfn`).
/// Throws SyntaxError prefixed with the file name, or std::runtime_error when a
/// file name does not match the module it declares.
Project parse_project(const std::map<std::string, std::string>& files);

/// Canonical text of every module keyed by file name.
std::map<std::string, std::string> render_project(const Project& project);

Project load_project(const std::filesystem::path& dir);

/// Writes every module as `<Module>.mfn`, creating `dir` if needed and deleting
/// `.mfn` files of modules that no longer exist.
void save_project(const Project& project, const std::filesystem::path& dir);

}  // namespace viewshift
