#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgpl {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
  friend auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

std::string to_string(const SourceLocation& loc);

/// Raised by every text-format reader (FML, CDL, VSP, formulas). The
/// location is the start of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& message);

  const SourceLocation& location() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceLocation loc_;
  std::string detail_;
};

/// Invalid configuration input: bad option binding, unknown option,
/// feature/binding contradiction, unrealized feature.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Failure to read or write the filesystem. Kept apart from validation
/// failures so callers can tell the two apart.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One finding. `subjects` names whatever the finding is about: feature
/// ids for configuration checks, type names for context conditions,
/// component ids for composition checks.
struct Violation {
  std::string code;
  std::vector<std::string> subjects;
  std::string message;
  std::optional<SourceLocation> location;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  void add(Violation v) { violations.push_back(std::move(v)); }
  void merge(const ValidationReport& other);
  bool has_code(std::string_view code) const;
};

}  // namespace cgpl
