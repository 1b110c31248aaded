#include "fixtures.hpp"

#include <sstream>

#include "viewshift/corpus.hpp"
#include "viewshift/project_io.hpp"
#include "viewshift/syntax.hpp"

namespace viewshift::testing {

Project project_of(const std::vector<std::string>& module_texts) {
  Project p;
  for (const auto& text : module_texts) {
    Module m = parse_module(text);
    std::string name = m.name;
    p.modules.emplace(std::move(name), std::move(m));
  }
  return p;
}

std::string canonical(const Project& p) {
  std::string out;
  for (const auto& [file, text] : render_project(p)) out += "-- " + file + "\n" + text;
  return out;
}

std::string decl_text(const Project& p, const std::string& m, const std::string& name) {
  const Module* mod = p.find(m);
  if (!mod) return "<no module " + m + ">";
  const auto i = mod->index_of(name);
  if (!i) return "<no declaration " + name + ">";
  return render_decl(mod->decls[*i]);
}

const std::vector<std::string>& standard_entries() {
  static const std::vector<std::string> entries = {"r1", "r2", "r3", "r4"};
  return entries;
}

std::optional<RefactorErrorKind> refusal(const std::function<Project()>& op) {
  try {
    op();
  } catch (const RefactorError& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::size_t>> step_boundaries() {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::istringstream in(load_fixture("step-states").files.at("boundaries.txt"));
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream words(line);
    std::string label;
    std::size_t steps = 0;
    if (words >> label >> steps) out.emplace_back(label, steps);
  }
  return out;
}

}  // namespace viewshift::testing
