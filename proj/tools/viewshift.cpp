// Command-line front end: scripts, single operations, equivalence checks,
// evaluation, formatting and corpus extraction.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "viewshift/corpus.hpp"
#include "viewshift/errors.hpp"
#include "viewshift/evaluator.hpp"
#include "viewshift/project_io.hpp"
#include "viewshift/refactor.hpp"
#include "viewshift/resolver.hpp"
#include "viewshift/script.hpp"
#include "viewshift/terms.hpp"

namespace fs = std::filesystem;
using namespace viewshift;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_entries(const std::string& list) {
  std::vector<std::string> out;
  std::istringstream in(list);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// Zero-argument bindings of Client whose names start with `r`.
std::vector<std::string> default_entries(const Project& p) {
  const Module* client = p.find("Client");
  if (!client) throw UsageError("the project has no Client module; pass --entries");
  std::vector<std::string> out;
  for (const auto& d : client->decls)
    if (d.is_fun() && d.fun().arity() == 0 && d.name().starts_with("r")) out.push_back(d.name());
  return out;
}

std::vector<std::string> entries_for(const Project& p, const std::string& flag) {
  return flag.empty() ? default_entries(p) : split_entries(flag);
}

Project load(const std::string& dir) {
  if (!fs::is_directory(dir)) throw UsageError("not a project directory: " + dir);
  try {
    return load_project(dir);
  } catch (const SyntaxError& e) {
    throw UsageError(e.what());
  }
}

void check_output(const std::string& in, const std::string& out) {
  if (fs::exists(out) && fs::exists(in) && fs::equivalent(in, out))
    throw UsageError("--out must differ from the input directory, which is never modified");
}

Script read_script(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read script " + path);
  std::stringstream text;
  text << file.rdbuf();
  try {
    return parse_script(text.str(), fs::path(path).stem().string());
  } catch (const ScriptSyntaxError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

int run_apply(const std::string& script_path, const std::string& dir, const std::string& out, bool checked,
              const std::string& entries, const std::string& snapshots) {
  check_output(dir, out);
  const Script script = read_script(script_path);
  const Project origin = load(dir);
  RunOptions options;
  options.checked = checked;
  if (checked) options.entries = entries_for(origin, entries);
  if (!snapshots.empty()) options.snapshot_dir = snapshots;
  RunResult result = run_script(origin, script, options);
  std::cout << result.log.summary();
  if (!result.log.ok()) {
    const auto& last = result.log.records.back();
    std::cerr << "step " << last.index << " (line " << last.step.line << ") failed: " << last.message << "\n";
    std::cerr << "the project as of step " << last.index - 1 << " is written to " << out << "\n";
  }
  save_project(result.project, out);
  return result.log.ok() ? kOk : kFailed;
}

int run_op(const std::vector<std::string>& words, const std::string& out) {
  if (words.size() < 2) throw UsageError("op needs a command and a project directory");
  const std::string dir = words.back();
  check_output(dir, out);
  std::string line;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) line += words[i] + " ";
  Script script;
  try {
    script = parse_script(line);
  } catch (const ScriptSyntaxError& e) {
    throw UsageError(e.what());
  }
  const Project p = load(dir);
  try {
    save_project(apply_step(p, script.steps.at(0)), out);
  } catch (const RefactorError& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}

int run_alpha_eq(const std::string& a, const std::string& b) {
  const std::string diff = alpha_diff_project(load(a), load(b));
  if (diff.empty()) {
    std::cout << "alpha-equivalent\n";
    return kOk;
  }
  std::cout << "not alpha-equivalent: " << diff << "\n";
  return kFailed;
}

int run_obs_eq(const std::string& a, const std::string& b, const std::string& entries) {
  const Project pa = load(a);
  const Project pb = load(b);
  ObservationReport report;
  try {
    report = observational_eq(pa, pb, entries_for(pa, entries));
  } catch (const ObservationError& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  for (const auto& [entry, text] : report.first) {
    const std::string& other = report.second.at(entry);
    std::cout << entry << "\t" << text << "\t" << other << "\t" << (text == other ? "same" : "DIFFERENT") << "\n";
  }
  std::cout << (report.equivalent ? "observationally equivalent\n" : "not observationally equivalent\n");
  return report.equivalent ? kOk : kFailed;
}

int run_eval(const std::string& dir, const std::string& entry) {
  const Project p = load(dir);
  try {
    std::cout << observe_entries(p, {entry}).at(entry) << "\n";
  } catch (const EvalError& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}

int run_render(const std::string& dir, const std::string& out) {
  check_output(dir, out);
  save_project(load(dir), out);
  return kOk;
}

int run_corpus_extract(const std::string& name, const std::string& out) {
  Fixture f;
  try {
    f = load_fixture(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& [path, text] : f.files) {
    const fs::path target = fs::path(out) / path;
    fs::create_directories(target.parent_path());
    std::ofstream(target) << text;
  }
  std::cout << "extracted " << f.files.size() << " files of " << name << " to " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viewshift: refactoring between the function and data views of a program"};
  app.require_subcommand(1);

  std::string script, dir, dir2, out, entries, snapshots, entry, name;
  bool checked = false;
  std::vector<std::string> words;

  auto* apply = app.add_subcommand("apply", "Run a script on a project");
  apply->add_option("script", script, "Script file")->required();
  apply->add_option("project", dir, "Project directory")->required();
  apply->add_option("--out", out, "Output directory")->required();
  apply->add_flag("--checked", checked, "Check observational equivalence with the origin after every step");
  apply->add_option("--entries", entries, "Comma-separated entries (default: Client's r* bindings)");
  apply->add_option("--snapshots", snapshots, "Directory receiving every intermediate project");

  auto* op = app.add_subcommand("op", "Apply a single operation: op <command> <args...> <project> --out <dir>");
  op->add_option("words", words, "Command, its arguments, then the project directory")->required();
  op->add_option("--out", out, "Output directory")->required();

  auto* alpha = app.add_subcommand("alpha-eq", "Are two projects alpha-equivalent?");
  alpha->add_option("a", dir)->required();
  alpha->add_option("b", dir2)->required();

  auto* obs = app.add_subcommand("obs-eq", "Compare the observations of two projects");
  obs->add_option("a", dir)->required();
  obs->add_option("b", dir2)->required();
  obs->add_option("--entries", entries, "Comma-separated entries (default: Client's r* bindings)");

  auto* eval = app.add_subcommand("eval", "Print the observation of an entry");
  eval->add_option("project", dir)->required();
  eval->add_option("entry", entry)->required();

  auto* render = app.add_subcommand("render", "Rewrite a project in canonical layout");
  render->add_option("project", dir)->required();
  render->add_option("--out", out, "Output directory")->required();

  auto* corpus = app.add_subcommand("corpus", "Shipped fixtures");
  corpus->require_subcommand(1);
  auto* extract = corpus->add_subcommand("extract", "Write a fixture's files to a directory");
  extract->add_option("name", name, "pfun, pdata, forward-script, reverse-script, step-states, scenario-mult, scenario-derive")
      ->required();
  extract->add_option("--out", out, "Output directory")->required();
  auto* list = corpus->add_subcommand("list", "List fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*apply) return run_apply(script, dir, out, checked, entries, snapshots);
    if (*op) return run_op(words, out);
    if (*alpha) return run_alpha_eq(dir, dir2);
    if (*obs) return run_obs_eq(dir, dir2, entries);
    if (*eval) return run_eval(dir, entry);
    if (*render) return run_render(dir, out);
    if (*extract) return run_corpus_extract(name, out);
    if (*list) {
      for (const auto& n : fixture_names()) std::cout << n << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
