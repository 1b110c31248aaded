#include "viewshift/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "viewshift/project_io.hpp"
#include "viewshift/resolver.hpp"

namespace viewshift {

namespace corpus_data {
const std::map<std::string, std::string>& files();
}

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.compare(0, prefix.size(), prefix) == 0; }

std::string stem(const std::string& file) {
  auto slash = file.rfind('/');
  auto base = slash == std::string::npos ? file : file.substr(slash + 1);
  return base.substr(0, base.rfind('.'));
}

std::map<std::string, std::string> observations(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto space = line.find(' ');
    out[line.substr(0, space)] = space == std::string::npos ? "" : line.substr(space + 1);
  }
  return out;
}

// Files under `root/`, keyed by their path below it.
std::map<std::string, std::string> files_under(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& [path, text] : corpus_data::files())
    if (starts_with(path, root + "/")) out[path.substr(root.size() + 1)] = text;
  return out;
}

// Projects are the directories holding .mfn files; a fixture whose .mfn files
// sit at its root has a single project labelled by the fixture name.
void collect(Fixture& f) {
  std::map<std::string, std::map<std::string, std::string>> sources;
  for (const auto& [path, text] : f.files) {
    const auto slash = path.rfind('/');
    const std::string dir = slash == std::string::npos ? f.name : path.substr(0, slash);
    const std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    if (path.ends_with(".mfn")) sources[dir][base] = text;
    if (path.ends_with(".vs")) f.scripts.push_back(parse_script(text, stem(path)));
    if (path.ends_with(".obs")) f.observations = observations(text);
  }
  for (auto& [label, files] : sources) {
    Project p = parse_project(files);
    resolve_project(p);
    f.projects.emplace_back(label, std::move(p));
  }
}

}  // namespace

const Project& Fixture::project(const std::string& label) const {
  for (const auto& [l, p] : projects)
    if (l == label) return p;
  throw std::invalid_argument("fixture " + name + " has no project " + label);
}

const Script& Fixture::script(const std::string& script_name) const {
  for (const auto& s : scripts)
    if (s.name == script_name) return s;
  throw std::invalid_argument("fixture " + name + " has no script " + script_name);
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"pfun",        "pdata",         "forward-script", "reverse-script",
                                                 "step-states", "scenario-mult", "scenario-derive"};
  return names;
}

Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  if (name == "forward-script" || name == "reverse-script") {
    const std::string file = name.substr(0, name.find('-')) + ".vs";
    f.files[file] = corpus_data::files().at("scripts/" + file);
  } else if (std::find(fixture_names().begin(), fixture_names().end(), name) != fixture_names().end()) {
    f.files = files_under(name);
  } else {
    throw std::invalid_argument("unknown fixture '" + name + "'");
  }
  collect(f);
  return f;
}

}  // namespace viewshift
