#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cgpl/blackboard.hpp"
#include "cgpl/component.hpp"

namespace cgpl {

/// Lower-case hex SHA-256 of `data`. All cache digests use this hash.
std::string sha256_hex(std::string_view data);

struct CacheEntry {
  std::string key_digest;
  std::string content_digest;

  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

/// Per-artifact record of what produced the last written content.
/// Stored as gencache.map: "<artifact> <key_digest> <content_digest>" per line.
struct GenCache {
  static constexpr std::string_view kFileName = "gencache.map";

  std::map<std::string, CacheEntry> entries;

  /// Malformed lines are dropped: a damaged entry behaves like a miss.
  static GenCache parse(std::string_view text);
  std::string serialize() const;

  /// Missing or unreadable file yields an empty cache.
  static GenCache load(const std::filesystem::path& dir);
  /// Writes atomically (temporary file + rename). Throws IoError.
  void save(const std::filesystem::path& dir) const;

  friend bool operator==(const GenCache&, const GenCache&) = default;
};

/// Everything an artifact's bytes may depend on.
struct CacheKeyInput {
  std::string artifact;
  std::string component_id;
  std::string component_version;
  BindingMode mode = BindingMode::GenerationTime;
  OptionMap options;
  VariationPointMap variation_points;
  std::string input_text;
  std::vector<Fact> consumed_facts;
};

/// SHA-256 over a line-oriented canonical rendering of `input`; facts
/// are sorted first so their discovery order does not matter.
std::string compute_key_digest(const CacheKeyInput& input);

}  // namespace cgpl
