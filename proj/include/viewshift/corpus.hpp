#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/script.hpp"

namespace viewshift {

/// A named set of shipped files: projects, scripts and the observations the
/// projects are expected to produce.
struct Fixture {
  std::string name;
  std::map<std::string, std::string> files;  // path relative to the fixture root -> text
  std::vector<std::pair<std::string, Project>> projects;
  std::vector<Script> scripts;
  std::map<std::string, std::string> observations;  // entry -> expected observation

  const Project& project(const std::string& label) const;
  const Script& script(const std::string& name) const;
};

const std::vector<std::string>& fixture_names();

/// Parses and resolves a shipped fixture. Throws std::invalid_argument for an unknown name.
Fixture load_fixture(const std::string& name);

}  // namespace viewshift
