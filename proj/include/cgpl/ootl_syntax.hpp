#pragma once

#include <string_view>

#include "cgpl/artifact.hpp"

namespace cgpl {

/// Parses `content` as one OOTL compilation unit (package line plus one
/// class, interface or enum). Invalid input yields an Invalid status at
/// the first offending token; end-of-input errors point just past the
/// last character.
SyntaxStatus check_ootl_syntax(std::string_view content);

/// Checks the container's concatenated content and stores the result.
const SyntaxStatus& validate_syntax(ArtifactContainer& container);

}  // namespace cgpl
