#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgpl/artifact.hpp"
#include "cgpl/blackboard.hpp"
#include "cgpl/class_diagram.hpp"
#include "cgpl/component.hpp"
#include "cgpl/composition.hpp"
#include "cgpl/gen_cache.hpp"

namespace cgpl {

inline constexpr std::string_view kTraceFileName = "trace.map";

// Generation violation codes.
inline constexpr std::string_view kGenClaimConflict = "GEN-CLAIM-CONFLICT";
inline constexpr std::string_view kGenSyntax = "GEN-SYNTAX";
inline constexpr std::string_view kGenHookUnresolved = "GEN-HOOK-UNRESOLVED";
inline constexpr std::string_view kGenUnclaimed = "GEN-UNCLAIMED";
inline constexpr std::string_view kGenDuplicateEmit = "GEN-DUPLICATE-EMIT";
inline constexpr std::string_view kGenMissingFact = "GEN-MISSING-FACT";
inline constexpr std::string_view kGenPhase = "GEN-PHASE";
inline constexpr std::string_view kGenBehavior = "GEN-BEHAVIOR";

struct FactQuery {
  FactTopic topic;
  std::optional<std::string> subject;
};

/// What an emitter declares about one artifact before producing it. The
/// cache key is computed from these inputs, so an emitter must not read
/// anything else that influences the artifact's bytes.
struct ArtifactRequest {
  std::string path;
  std::string input_text;  // canonical text of the input element(s) used
  std::vector<FactQuery> facts;
};

using EmitFn = std::function<void(ArtifactContainer&, const std::vector<Fact>&)>;

struct RunState;

/// Handed to every behavior while it runs. Operations are restricted to
/// the phase that owns them (claims and publication in declare, artifact
/// emission in emit, and so on); misuse is reported as GEN-PHASE.
class BehaviorContext {
 public:
  BehaviorContext(RunState& run, const GeneratorComponent& component, Phase phase);

  const GeneratorComponent& component() const { return component_; }
  Phase phase() const { return phase_; }
  const VariantSpec& spec() const;
  BindingMode mode() const;
  bool selected(std::string_view feature) const;

  const OptionMap& options() const;
  bool flag(std::string_view option) const;
  const std::string& variation_point(std::string_view name) const;

  const ClassDiagram& diagram() const;
  /// Transform phase only; throws std::logic_error elsewhere.
  ClassDiagram& mutable_diagram();

  void add_condition(ContextCondition condition);

  bool claim(const std::string& path);
  bool publish(FactTopic topic, std::string subject, Payload payload = {});
  std::vector<Fact> facts(FactTopic topic, const std::optional<std::string>& subject = std::nullopt);

  /// Produces one claimed artifact. On a cache hit `emit` is not called
  /// and the previous output is reused.
  void emit_artifact(const ArtifactRequest& request, const EmitFn& emit);

  void report(Violation violation);

 private:
  bool require_phase(Phase wanted, std::string_view operation);

  RunState& run_;
  const GeneratorComponent& component_;
  Phase phase_;
  BlackboardView view_;
};

struct GenerationReport {
  std::vector<std::string> written;
  std::vector<std::string> skipped_cache_hits;
  std::size_t facts_count = 0;
  ValidationReport violations;
  TraceIndex trace;
  Blackboard board;

  bool ok() const { return violations.valid(); }
};

/// Generation-time mode is vacuously valid; otherwise every hook.required
/// subject needs a hook.provided fact with the same subject.
ValidationReport resolve_hooks(const Blackboard& board, BindingMode mode);

/// Runs restrict, transform, declare and emit, checks every container's
/// syntax and the hooks, and only then replaces spec.output_path with the
/// new artifacts plus trace.map. Any violation leaves the output untouched.
/// The output directory is owned by the generator: it may hold only .oo
/// files and trace.map, otherwise IoError is thrown before anything runs.
/// ConfigError and CompositionFailure propagate from option resolution and
/// scheduling.
GenerationReport generate(const ComposedGenerator& composed, const ClassDiagram& diagram,
                          const VariantSpec& spec);

/// Like generate, but skips emission of artifacts whose key digest matches
/// `cache` and whose previous output is intact. The returned cache
/// describes the new output (or equals `cache` on failure).
std::pair<GenerationReport, GenCache> incremental_generate(const ComposedGenerator& composed,
                                                           const ClassDiagram& diagram,
                                                           const VariantSpec& spec,
                                                           const GenCache& cache);

}  // namespace cgpl
