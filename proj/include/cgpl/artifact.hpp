#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cgpl/diagnostics.hpp"
#include "cgpl/feature_model.hpp"

namespace cgpl {

/// Sentinel feature for framework-owned text that no feature contributes.
inline constexpr std::string_view kCoreFeature = "core";

/// Inclusive, 1-based line range.
struct LineRange {
  std::size_t first = 1;
  std::size_t last = 1;

  friend bool operator==(const LineRange&, const LineRange&) = default;
  friend auto operator<=>(const LineRange&, const LineRange&) = default;
};

struct Region {
  std::string text;  // whole lines, each ending in '\n'
  std::set<FeatureId> features;
  std::string component;
  std::size_t start_line = 1;

  std::size_t line_count() const;
  LineRange lines() const { return {start_line, start_line + line_count() - 1}; }
};

struct SyntaxStatus {
  enum class Kind { Unchecked, Valid, Invalid };
  Kind kind = Kind::Unchecked;
  std::string message;
  SourceLocation where;

  bool valid() const { return kind == Kind::Valid; }
};

/// In-memory buffer for one output file. Text is appended in regions of
/// whole lines, each tagged with the features and component that produced
/// it; adjacent regions with the same tags are merged.
class ArtifactContainer {
 public:
  explicit ArtifactContainer(std::string path) : path_(std::move(path)) {}

  /// Throws std::invalid_argument unless `text` is one or more complete
  /// lines and `features` is non-empty.
  void append(std::string_view text, std::set<FeatureId> features, std::string component);

  const std::string& path() const { return path_; }
  const std::vector<Region>& regions() const { return regions_; }
  std::string content() const;
  std::size_t line_count() const;

  const SyntaxStatus& syntax_status() const { return status_; }
  void set_syntax_status(SyntaxStatus status) { status_ = std::move(status); }

 private:
  std::string path_;
  std::vector<Region> regions_;
  SyntaxStatus status_;
};

struct TraceEntry {
  LineRange lines;
  std::set<FeatureId> features;
  std::string component;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct TraceLocation {
  std::string artifact;
  LineRange lines;

  friend bool operator==(const TraceLocation&, const TraceLocation&) = default;
  friend auto operator<=>(const TraceLocation&, const TraceLocation&) = default;
};

/// Feature <-> generated-line mapping. The two maps are inverses.
struct TraceIndex {
  std::map<FeatureId, std::set<TraceLocation>> by_feature;
  std::map<std::string, std::vector<TraceEntry>> by_artifact;

  void add(const std::string& artifact, const TraceEntry& entry);
  void add(const ArtifactContainer& container);

  /// trace.map text: one "<artifact>:<start>-<end> <component> <f>[,<f>...]"
  /// line per region, sorted by artifact then line.
  std::string serialize() const;
  /// Throws ParseError on a malformed line.
  static TraceIndex parse(std::string_view text);

  friend bool operator==(const TraceIndex&, const TraceIndex&) = default;
};

struct FeatureTrace {
  bool known = false;
  std::vector<TraceLocation> locations;
};

struct ArtifactTrace {
  bool known = false;
  std::vector<TraceEntry> regions;
};

FeatureTrace trace_feature(const TraceIndex& trace, std::string_view feature);
ArtifactTrace trace_artifact(const TraceIndex& trace, std::string_view artifact);

}  // namespace cgpl
