#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viewshift/ast.hpp"
#include "viewshift/evaluator.hpp"
#include "viewshift/refactor.hpp"

namespace viewshift {

// Script format: one command per line, whitespace-separated positional
// arguments, `#` starts a comment.
//
//   exhibit-function eval Const evalConst EvalMod
//   rename-top-level eval EvalMod fold1

struct ScriptStep {
  std::string command;
  std::vector<std::string> args;
  int line = 0;
  bool operator==(const ScriptStep&) const = default;
};

struct Script {
  std::string name;
  std::vector<ScriptStep> steps;
};

class ScriptSyntaxError : public std::runtime_error {
public:
  ScriptSyntaxError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct CommandSpec {
  std::string name;
  std::vector<std::string> params;  // argument names, for usage messages
};

/// Every command the engine understands, in documentation order.
const std::vector<CommandSpec>& command_table();

Script parse_script(std::string_view text, std::string name = {});

/// Applies one step. Throws RefactorError; the input is never modified.
Project apply_step(const Project& project, const ScriptStep& step);

enum class StepOutcome { Applied, Failed, NotEquivalent };
enum class CheckVerdict { NotChecked, Pass, Fail };

struct StepRecord {
  std::size_t index = 0;  // 1-based
  ScriptStep step;
  StepOutcome outcome = StepOutcome::Applied;
  std::optional<RefactorErrorKind> error;
  std::string message;  // refactoring error or equivalence mismatch
  CheckVerdict check = CheckVerdict::NotChecked;
  double elapsed_ms = 0;
};

struct RunLog {
  std::vector<StepRecord> records;
  bool ok() const { return records.empty() || records.back().outcome == StepOutcome::Applied; }
  /// One line per record.
  std::string summary() const;
};

struct RunOptions {
  /// Compare the observations of `entries` with the origin after every step.
  bool checked = false;
  std::vector<std::string> entries;
  /// Reference observations to check against instead of the origin's own,
  /// e.g. the golden observations shipped with a fixture.
  std::optional<std::map<std::string, std::string>> expected;
  /// When set, every intermediate project is written to `<dir>/NN-command/`.
  std::optional<std::filesystem::path> snapshot_dir;
  EvalOptions eval;
};

struct RunResult {
  /// The project after the last successful step.
  Project project;
  RunLog log;
};

/// Runs the steps in order and stops at the first failure.
RunResult run_script(const Project& project, const Script& script, const RunOptions& options = {});

}  // namespace viewshift
