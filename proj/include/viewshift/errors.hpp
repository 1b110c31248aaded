#pragma once

#include <stdexcept>
#include <string>

namespace viewshift {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

enum class ResolveErrorKind {
  DuplicateDefinition,
  UnresolvedName,
  AmbiguousName,
  UnknownModule,
  InvalidExport,
};

const char* to_string(ResolveErrorKind kind);

class ResolveError : public std::runtime_error {
public:
  ResolveError(ResolveErrorKind kind, std::string module, std::string name, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + " in module " + module + ": " + name +
                           (detail.empty() ? std::string() : " (" + detail + ")")),
        kind_(kind),
        module_(std::move(module)),
        name_(std::move(name)) {}

  ResolveErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }
  const std::string& name() const { return name_; }

private:
  ResolveErrorKind kind_;
  std::string module_;
  std::string name_;
};

}  // namespace viewshift
