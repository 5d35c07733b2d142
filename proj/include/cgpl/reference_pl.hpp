#pragma once

#include <memory>
#include <string_view>

#include "cgpl/component.hpp"
#include "cgpl/feature_model.hpp"

namespace cgpl {

// Class tags understood by the reference line.
inline constexpr std::string_view kTagNoBuilder = "nobuilder";
inline constexpr std::string_view kTagExternal = "external";

// FeatureGuard condition codes.
inline constexpr std::string_view kFgEnum = "FG-ENUM";
inline constexpr std::string_view kFgInterface = "FG-INTERFACE";
inline constexpr std::string_view kFgNoBuilder = "FG-NOBUILDER";
inline constexpr std::string_view kFgExternal = "FG-EXTERNAL";
inline constexpr std::string_view kFgTag = "FG-TAG";

/// FML source of the class-diagram-to-OOTL product line:
///
///   CD2Java
///     Types (mandatory): Class (mandatory), Enum, Interface, DefaultConstructor
///     Builder, Factory
///
/// with DefaultConstructor, Builder and Factory each requiring Class.
std::string_view reference_feature_model_text();
std::shared_ptr<const FeatureModel> reference_feature_model();

/// The five reference components: CoreFrontEnd, FeatureGuard, Types,
/// Builder and Factory. Throws RegistrationError if `model` lacks a
/// feature the components refer to.
ComponentRegistry build_reference_registry(std::shared_ptr<const FeatureModel> model);
ComponentRegistry build_reference_registry();

}  // namespace cgpl
