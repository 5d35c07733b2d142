#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgpl/component.hpp"
#include "cgpl/diagnostics.hpp"

namespace cgpl {

using Payload = std::map<std::string, std::string>;

struct Fact {
  FactTopic topic = FactTopic::TypeGenerated;
  std::string producer;
  std::string subject;
  Payload payload;

  friend bool operator==(const Fact&, const Fact&) = default;
  friend auto operator<=>(const Fact&, const Fact&) = default;
};

/// "topic producer subject k=v,k=v" -- the canonical line used in cache keys.
std::string to_string(const Fact& fact);

struct ClaimConflict {
  std::string path;
  std::string holder;
  std::string claimant;

  std::string message() const;
};

/// Generation-time fact store. Facts are append-only and keyed by
/// (topic, producer, subject); artifact claims are first-writer-wins.
class Blackboard {
 public:
  enum class PublishResult { Added, Repeated, Conflict };

  /// Re-publishing an identical fact is a no-op; a different payload
  /// under an existing key is a conflict and leaves the board unchanged.
  PublishResult publish(Fact fact);

  /// Facts of `topic`, optionally restricted to one subject, sorted.
  std::vector<Fact> query(FactTopic topic,
                          const std::optional<std::string>& subject = std::nullopt) const;

  const std::vector<Fact>& facts() const { return facts_; }
  const std::map<std::string, std::string>& claims() const { return claims_; }

 private:
  friend std::optional<ClaimConflict> claim_artifact(Blackboard& board, const std::string& path,
                                                     const std::string& component);

  std::vector<Fact> facts_;
  std::map<std::string, std::string> claims_;
};

/// Records `component` as owner of `path` and publishes artifact.claimed.
/// Idempotent for the same owner; returns the conflict otherwise.
std::optional<ClaimConflict> claim_artifact(Blackboard& board, const std::string& path,
                                            const std::string& component);

/// A component's window onto the board. Reads are limited to the
/// component's consumes-set and writes to its produces-set; a breach is
/// recorded as a GEN-FACT-DISCIPLINE violation and the operation is
/// refused.
class BlackboardView {
 public:
  BlackboardView(Blackboard& board, const GeneratorComponent& component, ValidationReport& sink);

  bool publish(FactTopic topic, std::string subject, Payload payload = {});
  std::vector<Fact> read(FactTopic topic,
                         const std::optional<std::string>& subject = std::nullopt);

 private:
  Blackboard& board_;
  const GeneratorComponent& component_;
  ValidationReport& sink_;
};

}  // namespace cgpl
