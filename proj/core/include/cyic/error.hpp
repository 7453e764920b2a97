#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyic {

/// Base of every error the toolkit raises. `kind()` is a stable machine-readable tag
/// used by the CLI error report.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
  virtual const char* kind() const noexcept { return "error"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// Malformed input file contents. `line()` is 1-based, 0 when not tied to a row.
class InputError : public Error {
 public:
  InputError(const std::string& message, std::string path = {}, std::size_t line = 0)
      : Error(decorate(message, path, line)), path_(std::move(path)), line_(line) {}

  const char* kind() const noexcept override { return "input"; }
  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string decorate(const std::string& message, const std::string& path,
                              std::size_t line) {
    std::string out;
    if (!path.empty()) out += path;
    if (line != 0) out += (out.empty() ? "line " : ":") + std::to_string(line);
    if (!out.empty()) out += ": ";
    return out + message;
  }

  std::string path_;
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "schema"; }
};

class PrerequisiteError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "prerequisite"; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

}  // namespace cyic
