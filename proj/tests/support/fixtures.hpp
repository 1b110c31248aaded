#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/refactor.hpp"

namespace viewshift::testing {

/// Project from module texts (the module name is read from each header).
Project project_of(const std::vector<std::string>& module_texts);

/// All modules rendered canonically, concatenated in name order.
std::string canonical(const Project& p);

/// Text of one rendered declaration of module `m`.
std::string decl_text(const Project& p, const std::string& m, const std::string& name);

const std::vector<std::string>& standard_entries();

/// Kind of the RefactorError raised by `op`, or nullopt when it succeeds.
std::optional<RefactorErrorKind> refusal(const std::function<Project()>& op);

}  // namespace viewshift::testing

namespace viewshift::testing {

/// Step-state label and the number of forward-script steps that produce it.
std::vector<std::pair<std::string, std::size_t>> step_boundaries();

}  // namespace viewshift::testing
