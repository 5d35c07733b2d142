#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgpl/component.hpp"

namespace cgpl {

inline constexpr std::string_view kCmpDupId = "CMP-DUP-ID";
inline constexpr std::string_view kCmpConstraint = "CMP-CONSTRAINT";
inline constexpr std::string_view kCmpNoProducer = "CMP-NO-PRODUCER";
inline constexpr std::string_view kCmpFactCycle = "CMP-FACT-CYCLE";
inline constexpr std::string_view kCmpConcernClash = "CMP-CONCERN-CLASH";

struct CompositionError {
  std::string code;
  std::string detail;
  std::vector<std::string> involved;
};

class CompositionFailure : public std::runtime_error {
 public:
  explicit CompositionFailure(CompositionError error);
  const CompositionError& error() const { return error_; }

 private:
  CompositionError error_;
};

/// Result of A ⊗ B. The merged interface is kept canonical: options,
/// variation points and forced values are qualified "Component.name" and
/// every list is sorted and duplicate-free, so it compares as a set.
struct ComposedGenerator {
  std::vector<ComponentPtr> components;
  ComponentInterface merged_interface;
  std::shared_ptr<const FeatureModel> feature_model;

  ComponentPtr find(std::string_view id) const;
};

/// Lifts a single component so it can take part in composition.
ComposedGenerator as_composed(ComponentPtr component, std::shared_ptr<const FeatureModel> model);

/// The composition operator. Structural only: merges interfaces and
/// concatenates the component lists; constraint checking is left to
/// validate_composition. Throws CompositionFailure with CMP-DUP-ID or
/// CMP-CONCERN-CLASH.
ComposedGenerator compose(const ComposedGenerator& a, const ComposedGenerator& b);

/// Left fold of compose over `components`, which must be non-empty.
ComposedGenerator compose_all(std::span<const ComponentPtr> components,
                              std::shared_ptr<const FeatureModel> model);

/// resolve_components followed by compose_all over the registry's model.
ComposedGenerator compose_variant(const ComponentRegistry& registry, const VariantSpec& spec);

/// Evaluates every interface constraint under the selection and the
/// effective options, checks that each consumed topic has a producer and
/// that the producer/consumer graph is acyclic, and in run_time/hybrid
/// mode that required hook patterns are provided.
ValidationReport validate_composition(const ComposedGenerator& composed, const VariantSpec& spec);

struct ScheduleEntry {
  std::string component;
  std::string behavior;
  Phase phase = Phase::Emit;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

using Schedule = std::vector<ScheduleEntry>;

/// Applicable behaviors ordered by phase, then fact topology (declare and
/// emit phases), then component id and behavior name. Throws
/// CompositionFailure CMP-FACT-CYCLE when no topological order exists.
Schedule schedule(const ComposedGenerator& composed, const VariantSpec& spec);

/// "Comp.option" -> value for every component of the composition.
OptionMap qualified_options(const ComposedGenerator& composed, const VariantSpec& spec);

/// True if provided pattern `provided` covers required pattern `required`
/// ('*' matches any run of characters).
bool hook_pattern_matches(std::string_view provided, std::string_view required);

}  // namespace cgpl
