#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "viewshift/ast.hpp"

namespace viewshift {

struct Value;

struct VInt {
  std::int64_t value = 0;
  bool operator==(const VInt&) const = default;
};
struct VStr {
  std::string value;
  bool operator==(const VStr&) const = default;
};
struct VCon {
  std::string name;
  std::vector<Value> args;
  bool operator==(const VCon&) const;
};
struct VTuple {
  std::vector<Value> items;
  bool operator==(const VTuple&) const;
};
/// A function value; only its remaining arity and a label are observable.
struct VClosure {
  std::size_t remaining = 0;
  std::string label;
  bool operator==(const VClosure&) const = default;
};
/// Result of `print`.
struct VOutput {
  std::string text;
  bool operator==(const VOutput&) const = default;
};

struct Value {
  std::variant<VInt, VStr, VCon, VTuple, VClosure, VOutput> node;
  bool operator==(const Value&) const = default;
};

/// Haskell-style rendering: `3`, `"a"`, `Add (Const 1, Const 2)`.
std::string show_value(const Value& v);

/// What an entry observation prints: the raw text of a VOutput, the shown form otherwise.
std::string observation_text(const Value& v);

enum class EvalErrorKind { PatternMatchFailure, UnresolvedName, StepBudgetExceeded, TypeError, BlackHole };

const char* to_string(EvalErrorKind kind);

class EvalError : public std::runtime_error {
public:
  EvalError(EvalErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

private:
  EvalErrorKind kind_;
};

struct EvalOptions {
  std::size_t step_budget = 1'000'000;
  /// Guards the native stack against non-tail runaway recursion.
  std::size_t depth_limit = 100'000;
};

struct EvalStats {
  std::size_t steps = 0;
  std::size_t thunks_forced = 0;
};

/// Call-by-need evaluation of `expr` in the top-level scope of `module`,
/// forced deeply. Resolution failures surface as EvalError(UnresolvedName).
Value evaluate(const Project& project, const std::string& module, const Expr& expr, const EvalOptions& options = {},
               EvalStats* stats = nullptr);

/// Evaluates zero-argument top-level bindings. An entry is `M.x`, or a plain
/// name defined in exactly one module.
std::map<std::string, std::string> observe_entries(const Project& project, const std::vector<std::string>& entries,
                                                   const EvalOptions& options = {});

struct ObservationReport {
  bool equivalent = false;
  std::map<std::string, std::string> first;
  std::map<std::string, std::string> second;
  std::vector<std::string> mismatched;
};

/// Raised by observational_eq; `which` is 1 or 2 for the failing project.
class ObservationError : public std::runtime_error {
public:
  ObservationError(int which, const std::string& message)
      : std::runtime_error("project " + std::to_string(which) + ": " + message), which_(which) {}
  int which() const { return which_; }

private:
  int which_;
};

ObservationReport observational_eq(const Project& a, const Project& b, const std::vector<std::string>& entries,
                                   const EvalOptions& options = {});

}  // namespace viewshift
