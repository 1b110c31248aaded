#pragma once

#include <functional>
#include <string>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/refactor.hpp"

namespace viewshift::testing {

/// A refactoring call that must be refused with `expected`.
struct RefusalCase {
  std::string name;
  RefactorErrorKind expected;
  Project input;
  std::function<Project(const Project&)> call;
};

/// At least one case per error kind of every operation.
std::vector<RefusalCase> refusal_cases();

}  // namespace viewshift::testing
