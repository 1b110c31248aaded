#include "viewshift/project_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "viewshift/errors.hpp"
#include "viewshift/syntax.hpp"

namespace viewshift {

namespace fs = std::filesystem;

Project parse_project(const std::map<std::string, std::string>& files) {
  Project project;
  for (const auto& [file, text] : files) {
    Module m;
    try {
      m = parse_module(text);
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.line(), e.column(), file + ": " + e.what());
    }
    if (fs::path(file).stem().string() != m.name)
      throw std::runtime_error(file + ": declares module " + m.name + ", expected file " + m.name + ".mfn");
    const std::string name = m.name;
    project.modules.emplace(name, std::move(m));
  }
  return project;
}

std::map<std::string, std::string> render_project(const Project& project) {
  std::map<std::string, std::string> out;
  for (const auto& [name, m] : project.modules) out[name + ".mfn"] = render_module(m);
  return out;
}

Project load_project(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".mfn") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    files[entry.path().filename().string()] = text.str();
  }
  return parse_project(files);
}

void save_project(const Project& project, const fs::path& dir) {
  fs::create_directories(dir);
  const auto files = render_project(project);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mfn" &&
        !files.count(entry.path().filename().string()))
      fs::remove(entry.path());
  for (const auto& [file, text] : files) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error((dir / file).string() + ": write failed");
  }
}

}  // namespace viewshift
