#include "cgpl/diagnostics.hpp"

#include <algorithm>

namespace cgpl {

std::string to_string(const SourceLocation& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

ParseError::ParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(to_string(loc) + ": " + message),
      loc_(loc),
      detail_(message) {}

std::string to_string(const Violation& v) {
  std::string out = v.code + ": " + v.message;
  if (v.location) out += " (at " + to_string(*v.location) + ")";
  return out;
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(),
                    other.violations.end());
}

bool ValidationReport::has_code(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

}  // namespace cgpl
