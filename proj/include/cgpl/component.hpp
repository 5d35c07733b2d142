#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgpl/diagnostics.hpp"
#include "cgpl/feature_model.hpp"
#include "cgpl/formula.hpp"

namespace cgpl {

enum class ComponentKind { FrontEnd, BackEnd };
enum class Phase { Restrict, Transform, Declare, Emit };
enum class BindingMode { GenerationTime, RunTime, Hybrid };

/// The closed fact ontology exchanged over the blackboard.
enum class FactTopic {
  TypeGenerated,
  ConstructorGenerated,
  MethodGenerated,
  ArtifactClaimed,
  HookProvided,
  HookRequired,
};

std::string_view to_string(ComponentKind kind);
std::string_view to_string(Phase phase);
std::string_view to_string(BindingMode mode);
std::string_view to_string(FactTopic topic);

std::optional<BindingMode> parse_binding_mode(std::string_view text);
/// Throws std::invalid_argument for names outside the ontology.
FactTopic parse_fact_topic(std::string_view text);

struct Concern {
  std::string id;
  std::string description;

  friend auto operator<=>(const Concern&, const Concern&) = default;
};

enum class OptionType { Flag, Choice, Text };

using OptionValue = std::variant<bool, std::string>;

std::string to_string(const OptionValue& value);

struct OptionDecl {
  std::string name;
  OptionType type = OptionType::Flag;
  std::vector<std::string> choices;  // Choice only
  OptionValue default_value = false;

  friend bool operator==(const OptionDecl&, const OptionDecl&) = default;
};

enum class VariationPointKind { TextFragment, NamePattern };

struct VariationPoint {
  std::string name;
  VariationPointKind kind = VariationPointKind::TextFragment;
  std::string default_text;

  friend bool operator==(const VariationPoint&, const VariationPoint&) = default;
};

/// Selecting `feature` pins `option` to `value`.
struct ForcedOption {
  FeatureId feature;
  std::string option;
  OptionValue value;

  friend bool operator==(const ForcedOption&, const ForcedOption&) = default;
};

struct ComponentInterface {
  std::set<Concern> concerns;
  std::vector<Formula> constraints;
  std::vector<OptionDecl> options;
  std::vector<VariationPoint> variation_points;
  std::vector<ForcedOption> forced;
  std::set<FactTopic> produces;
  std::set<FactTopic> consumes;
  std::set<std::string> hooks_provided;
  std::set<std::string> hooks_required;

  const OptionDecl* find_option(std::string_view name) const;
  const VariationPoint* find_variation_point(std::string_view name) const;

  friend bool operator==(const ComponentInterface&, const ComponentInterface&) = default;
};

class BehaviorContext;
using BehaviorFn = std::function<void(BehaviorContext&)>;

struct Behavior {
  std::string name;
  Phase phase = Phase::Emit;
  Formula applicability;  // defaults to true
  BehaviorFn run;
};

struct GeneratorComponent {
  std::string id;
  std::string version;
  ComponentKind kind = ComponentKind::BackEnd;
  std::set<FeatureId> realizes;
  ComponentInterface interface;
  std::vector<Behavior> behaviors;
};

using ComponentPtr = std::shared_ptr<const GeneratorComponent>;

/// Static well-formedness of a component against a feature model: kind
/// discipline, unique and type-correct options and variation points,
/// and closure of every formula over declared features and own options.
/// Returns one line per problem.
std::vector<std::string> check_component(const GeneratorComponent& component,
                                         const FeatureModel& model);

class RegistrationError : public std::invalid_argument {
 public:
  RegistrationError(std::string component, std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Built once, then read-only.
class ComponentRegistry {
 public:
  explicit ComponentRegistry(std::shared_ptr<const FeatureModel> model);

  /// Throws RegistrationError if the component fails check_component or
  /// its id is taken.
  void add(GeneratorComponent component);

  const FeatureModel& feature_model() const { return *model_; }
  std::shared_ptr<const FeatureModel> feature_model_ptr() const { return model_; }

  ComponentPtr find(std::string_view id) const;
  const std::map<std::string, ComponentPtr, std::less<>>& components() const {
    return components_;
  }

 private:
  std::shared_ptr<const FeatureModel> model_;
  std::map<std::string, ComponentPtr, std::less<>> components_;
};

struct OptionBinding {
  std::string component;
  std::string option;
  std::string value;

  friend bool operator==(const OptionBinding&, const OptionBinding&) = default;
};

struct VariationPointBinding {
  std::string component;
  std::string point;
  std::string text;

  friend bool operator==(const VariationPointBinding&, const VariationPointBinding&) = default;
};

struct VariantSpec {
  std::string name;
  std::string model_path;
  Configuration configuration;
  std::vector<OptionBinding> option_bindings;
  std::vector<VariationPointBinding> vp_bindings;
  BindingMode mode = BindingMode::GenerationTime;
  std::string output_path;

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

/// Every binding names a registered component and one of its declared
/// options/variation points, with a type-correct value. Code VSP-BINDING.
ValidationReport check_bindings(const VariantSpec& spec, const ComponentRegistry& registry);

/// Components realizing a selected feature plus the always-on ones
/// (empty realizes-set), sorted by id. Throws ConfigError
/// RES-UNREALIZED / RES-AMBIGUOUS.
std::vector<ComponentPtr> resolve_components(const Configuration& config,
                                             const ComponentRegistry& registry);

using OptionMap = std::map<std::string, OptionValue>;

/// Resolves every declared option: feature-forced value, else explicit
/// binding, else default. Throws ConfigError OPT-CONTRADICTION when a
/// binding disagrees with a forced value, OPT-UNKNOWN for a binding to an
/// undeclared option, OPT-TYPE for an ill-typed binding.
OptionMap effective_configuration(const GeneratorComponent& component,
                                  const VariantSpec& spec);

using VariationPointMap = std::map<std::string, std::string>;

/// Bound text or default for every declared variation point. Throws
/// ConfigError VP-UNKNOWN / VP-PATTERN.
VariationPointMap effective_variation_points(const GeneratorComponent& component,
                                             const VariantSpec& spec);

/// "create%s" + "Person" -> "createPerson".
std::string apply_name_pattern(std::string_view pattern, std::string_view name);
bool is_name_pattern(std::string_view pattern);

}  // namespace cgpl
