#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cgpl/diagnostics.hpp"

namespace cgpl {

using FeatureId = std::string;

enum class Variability { Mandatory, Optional };
enum class GroupKind { Xor, Or };

struct FeatureGroup {
  GroupKind kind = GroupKind::Xor;
  std::vector<FeatureId> members;

  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

struct Feature {
  FeatureId id;
  std::string name;
  std::optional<FeatureId> parent;
  Variability variability = Variability::Optional;
  std::vector<FeatureId> children;
  std::optional<FeatureGroup> group;

  friend bool operator==(const Feature&, const Feature&) = default;
};

enum class ConstraintKind { Requires, Excludes };

struct CrossTreeConstraint {
  ConstraintKind kind = ConstraintKind::Requires;
  FeatureId lhs;
  FeatureId rhs;

  friend bool operator==(const CrossTreeConstraint&,
                         const CrossTreeConstraint&) = default;
};

struct FeatureModel {
  std::string name;
  FeatureId root;
  std::map<FeatureId, Feature> features;
  std::vector<CrossTreeConstraint> constraints;

  bool contains(std::string_view id) const {
    return features.find(std::string(id)) != features.end();
  }
  const Feature& feature(std::string_view id) const;

  /// Feature ids in depth-first declaration order, root first.
  std::vector<FeatureId> preorder() const;

  friend bool operator==(const FeatureModel&, const FeatureModel&) = default;
};

struct Configuration {
  std::set<FeatureId> selected;

  bool has(std::string_view id) const {
    return selected.find(std::string(id)) != selected.end();
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

Configuration make_configuration(std::initializer_list<std::string_view> ids);

/// Splits "A,B , C" into a configuration. Empty items are ignored.
Configuration parse_configuration_list(std::string_view list);

std::string join_configuration(const Configuration& config);

/// Parses FML text. Structural problems (duplicate ids, unknown
/// constraint endpoints, group members that are not children) are
/// reported as ParseError at the offending token.
FeatureModel parse_feature_model(std::string_view source);

/// Prints canonical FML; parse_feature_model(print_feature_model(m)) == m.
std::string print_feature_model(const FeatureModel& model);

// Stable violation codes.
inline constexpr std::string_view kCfgRoot = "CFG-ROOT";
inline constexpr std::string_view kCfgParent = "CFG-PARENT";
inline constexpr std::string_view kCfgMandatory = "CFG-MANDATORY";
inline constexpr std::string_view kCfgXor = "CFG-XOR";
inline constexpr std::string_view kCfgOr = "CFG-OR";
inline constexpr std::string_view kCfgRequires = "CFG-REQUIRES";
inline constexpr std::string_view kCfgExcludes = "CFG-EXCLUDES";
inline constexpr std::string_view kCfgUnknown = "CFG-UNKNOWN";

ValidationReport validate_configuration(const FeatureModel& model,
                                        const Configuration& config);

inline constexpr std::size_t kMaxEnumerableFeatures = 24;

struct EnumerationResult {
  std::size_t count = 0;
  std::optional<std::vector<Configuration>> configurations;
};

/// Brute force over every subset of the model's features. The list,
/// when requested, is ordered lexicographically by sorted feature-id
/// tuple and truncated to `list_limit` entries; `count` is always the
/// full total. Throws std::length_error beyond kMaxEnumerableFeatures.
EnumerationResult enumerate_configurations(
    const FeatureModel& model, bool with_list = false,
    std::optional<std::size_t> list_limit = std::nullopt);

}  // namespace cgpl
