#include "viewshift/script.hpp"

#include <charconv>
#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

#include "viewshift/project_io.hpp"

namespace viewshift {

namespace {

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : command_table())
    if (c.name == name) return &c;
  return nullptr;
}

std::optional<std::size_t> to_count(const std::string& s) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

// Arguments that must be numbers or keywords are checked when the script is parsed.
void check_arguments(const ScriptStep& step) {
  const auto& a = step.args;
  auto need_count = [&](std::size_t i) {
    if (!to_count(a[i]))
      throw ScriptSyntaxError(step.line, step.command + ": argument " + std::to_string(i + 1) + " ('" + a[i] +
                                             "') must be a non-negative integer");
  };
  if (step.command == "new-def-fun-app" || step.command == "generative-fold") need_count(1);
  if (step.command == "generalise") {
    need_count(4);
    if (a[6] != "curried" && a[6] != "tupled")
      throw ScriptSyntaxError(step.line, "generalise: shape must be curried or tupled, not '" + a[6] + "'");
    if (a[7] != "RecType" && a[7] != "OtherType")
      throw ScriptSyntaxError(step.line, "generalise: mode must be RecType or OtherType, not '" + a[7] + "'");
  }
}

std::size_t count_arg(const std::string& s) { return *to_count(s); }

std::string outcome_text(const StepRecord& r) {
  switch (r.outcome) {
    case StepOutcome::Applied: return "applied";
    case StepOutcome::Failed: return "failed";
    case StepOutcome::NotEquivalent: return "not-equivalent";
  }
  return "?";
}

std::string step_text(const ScriptStep& s) {
  std::string out = s.command;
  for (const auto& a : s.args) out += " " + a;
  return out;
}

std::string snapshot_name(std::size_t index, const std::string& command) {
  std::ostringstream os;
  os << std::setw(2) << std::setfill('0') << index << "-" << command;
  return os.str();
}

std::optional<std::string> compare(const std::map<std::string, std::string>& origin,
                                   const std::map<std::string, std::string>& now) {
  for (const auto& [entry, text] : origin) {
    auto it = now.find(entry);
    if (it == now.end()) return entry + " is missing";
    if (it->second != text) return entry + ": expected \"" + text + "\", got \"" + it->second + "\"";
  }
  return std::nullopt;
}

}  // namespace

const std::vector<CommandSpec>& command_table() {
  static const std::vector<CommandSpec> table = {
      {"exhibit-function", {"f", "constructor", "new-name", "module"}},
      {"new-def-fun-app", {"f", "arg-count", "new-name", "module"}},
      {"generalise", {"f", "constructor", "local", "module", "index", "param", "curried|tupled", "RecType|OtherType"}},
      {"generalise-ident", {"f", "module", "ident", "param"}},
      {"lift-def", {"f", "local", "module"}},
      {"rename-top-level", {"f", "module", "new-name"}},
      {"move-def", {"f", "from", "to"}},
      {"unfold-instance", {"name", "f", "module"}},
      {"fold-def", {"f", "module"}},
      {"generative-fold", {"f", "arg-count", "module"}},
      {"remove-def", {"f", "module"}},
      {"remove-local-def", {"name", "f", "module"}},
      {"clean-imports", {"module"}},
      {"rm-from-exports", {"f", "module"}},
      {"simplify-case-pattern", {"f", "module"}},
      {"case-to-eq", {"f", "module"}},
      {"case-to-eq2", {"f", "module"}},
      {"duplicate-into-comment", {"f", "module"}},
      {"rm-comment-before", {"f", "module"}},
      {"unify-alpha", {"keep", "drop", "module"}},
      {"remove-module", {"module"}},
  };
  return table;
}

Script parse_script(std::string_view text, std::string name) {
  Script script{std::move(name), {}};
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    ScriptStep step;
    step.line = line_no;
    if (!(words >> step.command)) continue;
    for (std::string w; words >> w;) step.args.push_back(w);
    const CommandSpec* spec = find_command(step.command);
    if (!spec) throw ScriptSyntaxError(line_no, "unknown command '" + step.command + "'");
    if (step.args.size() != spec->params.size()) {
      std::string usage = spec->name;
      for (const auto& p : spec->params) usage += " <" + p + ">";
      throw ScriptSyntaxError(line_no, step.command + " takes " + std::to_string(spec->params.size()) +
                                           " arguments, got " + std::to_string(step.args.size()) + " (usage: " +
                                           usage + ")");
    }
    check_arguments(step);
    script.steps.push_back(std::move(step));
  }
  return script;
}

Project apply_step(const Project& p, const ScriptStep& step) {
  const auto& a = step.args;
  const std::string& c = step.command;
  if (c == "exhibit-function") return exhibit_function(p, a[0], a[1], a[2], a[3]);
  if (c == "new-def-fun-app") return new_def_fun_app(p, a[0], count_arg(a[1]), a[2], a[3]);
  if (c == "generalise")
    return generalise(p, a[0], a[1], a[2], a[3], count_arg(a[4]), a[5],
                      a[6] == "tupled" ? ArgShape::Tupled : ArgShape::Curried,
                      a[7] == "RecType" ? GeneraliseMode::RecType : GeneraliseMode::OtherType);
  if (c == "generalise-ident") return generalise_ident(p, a[0], a[1], a[2], a[3]);
  if (c == "lift-def") return lift_to_top(p, a[0], a[1], a[2]);
  if (c == "rename-top-level") return rename_top_level(p, a[0], a[1], a[2]);
  if (c == "move-def") return move_def(p, a[0], a[1], a[2]);
  if (c == "unfold-instance") return unfold_instance(p, a[0], a[1], a[2]);
  if (c == "fold-def") return fold_top_level(p, a[0], a[1]);
  if (c == "generative-fold") return generative_fold(p, a[0], count_arg(a[1]), a[2]);
  if (c == "remove-def") return remove_def(p, a[0], a[1]);
  if (c == "remove-local-def") return remove_local_def(p, a[0], a[1], a[2]);
  if (c == "clean-imports") return clean_imports(p, a[0]);
  if (c == "rm-from-exports") return rm_from_exports(p, a[0], a[1]);
  if (c == "simplify-case-pattern") return simplify_case_pattern(p, a[0], a[1]);
  if (c == "case-to-eq") return case_to_eq(p, a[0], a[1], 1);
  if (c == "case-to-eq2") return case_to_eq(p, a[0], a[1], 2);
  if (c == "duplicate-into-comment") return duplicate_into_comment(p, a[0], a[1]);
  if (c == "rm-comment-before") return rm_comment_before(p, a[0], a[1]);
  if (c == "unify-alpha") return unify_alpha(p, a[0], a[1], a[2]);
  if (c == "remove-module") return remove_module(p, a[0]);
  throw std::invalid_argument("unknown command " + c);
}

std::string RunLog::summary() const {
  std::ostringstream os;
  for (const auto& r : records) {
    os << "[" << std::setw(2) << r.index << "] " << outcome_text(r);
    if (r.check == CheckVerdict::Pass) os << " (equivalent)";
    os << "  " << step_text(r.step) << "  " << std::fixed << std::setprecision(2) << r.elapsed_ms << " ms";
    if (!r.message.empty()) os << "\n     " << r.message;
    os << "\n";
  }
  return os.str();
}

RunResult run_script(const Project& project, const Script& script, const RunOptions& options) {
  RunResult result{project, {}};
  std::optional<std::map<std::string, std::string>> origin;
  std::string origin_error;
  if (options.checked && options.expected) {
    origin.emplace();
    for (const auto& e : options.entries) {
      auto it = options.expected->find(e);
      if (it == options.expected->end()) {
        origin.reset();
        origin_error = "no reference observation for " + e;
        break;
      }
      origin->emplace(e, it->second);
    }
  } else if (options.checked) {
    try {
      origin = observe_entries(project, options.entries, options.eval);
    } catch (const std::exception& e) {
      origin_error = std::string("the original project cannot be observed: ") + e.what();
    }
  }
  if (options.snapshot_dir) save_project(project, *options.snapshot_dir / "00-origin");

  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const ScriptStep& step = script.steps[i];
    StepRecord rec;
    rec.index = i + 1;
    rec.step = step;
    const auto start = std::chrono::steady_clock::now();
    std::optional<Project> next;
    try {
      next = apply_step(result.project, step);
    } catch (const RefactorError& e) {
      rec.outcome = StepOutcome::Failed;
      rec.error = e.kind();
      rec.message = e.what();
    }
    if (next && options.checked) {
      std::optional<std::string> mismatch;
      if (!origin) {
        mismatch = origin_error;
      } else {
        try {
          mismatch = compare(*origin, observe_entries(*next, options.entries, options.eval));
        } catch (const std::exception& e) {
          mismatch = std::string("the refactored project cannot be observed: ") + e.what();
        }
      }
      rec.check = mismatch ? CheckVerdict::Fail : CheckVerdict::Pass;
      if (mismatch) {
        rec.outcome = StepOutcome::NotEquivalent;
        rec.message = *mismatch;
      }
    }
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool ok = rec.outcome == StepOutcome::Applied;
    result.log.records.push_back(std::move(rec));
    if (!ok) break;
    result.project = std::move(*next);
    if (options.snapshot_dir) save_project(result.project, *options.snapshot_dir / snapshot_name(i + 1, step.command));
  }
  return result;
}

}  // namespace viewshift
