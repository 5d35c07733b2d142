#include "cgpl/artifact.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace cgpl {

std::size_t Region::line_count() const {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

void ArtifactContainer::append(std::string_view text, std::set<FeatureId> features,
                               std::string component) {
  if (text.empty() || text.back() != '\n') {
    throw std::invalid_argument("region text for " + path_ + " must be complete lines");
  }
  if (features.empty()) {
    throw std::invalid_argument("region of " + path_ + " carries no feature");
  }
  if (!regions_.empty() && regions_.back().features == features &&
      regions_.back().component == component) {
    regions_.back().text += text;
    return;
  }
  Region r;
  r.text = std::string(text);
  r.features = std::move(features);
  r.component = std::move(component);
  r.start_line = line_count() + 1;
  regions_.push_back(std::move(r));
}

std::string ArtifactContainer::content() const {
  std::string out;
  for (const auto& r : regions_) out += r.text;
  return out;
}

std::size_t ArtifactContainer::line_count() const {
  std::size_t n = 0;
  for (const auto& r : regions_) n += r.line_count();
  return n;
}

void TraceIndex::add(const std::string& artifact, const TraceEntry& entry) {
  by_artifact[artifact].push_back(entry);
  for (const auto& f : entry.features) by_feature[f].insert({artifact, entry.lines});
}

void TraceIndex::add(const ArtifactContainer& container) {
  by_artifact[container.path()];
  for (const auto& r : container.regions()) {
    add(container.path(), {r.lines(), r.features, r.component});
  }
}

std::string TraceIndex::serialize() const {
  std::ostringstream out;
  for (const auto& [artifact, entries] : by_artifact) {
    for (const auto& e : entries) {
      out << artifact << ":" << e.lines.first << "-" << e.lines.last << " " << e.component << " ";
      bool first = true;
      for (const auto& f : e.features) {
        out << (first ? "" : ",") << f;
        first = false;
      }
      out << "\n";
    }
  }
  return out.str();
}

namespace {

std::size_t parse_number(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw ParseError({line, 1}, "bad line number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

TraceIndex TraceIndex::parse(std::string_view text) {
  TraceIndex index;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (line.empty()) continue;

    auto sp1 = line.find(' ');
    auto sp2 = sp1 == std::string_view::npos ? sp1 : line.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos) throw ParseError({lineno, 1}, "expected three fields");
    std::string_view where = line.substr(0, sp1);
    std::string_view component = line.substr(sp1 + 1, sp2 - sp1 - 1);
    std::string_view features = line.substr(sp2 + 1);

    auto colon = where.rfind(':');
    auto dash = colon == std::string_view::npos ? colon : where.find('-', colon);
    if (dash == std::string_view::npos || colon == 0) {
      throw ParseError({lineno, 1}, "expected <artifact>:<start>-<end>");
    }
    TraceEntry e;
    e.lines.first = parse_number(where.substr(colon + 1, dash - colon - 1), lineno);
    e.lines.last = parse_number(where.substr(dash + 1), lineno);
    if (e.lines.last < e.lines.first) throw ParseError({lineno, 1}, "empty line range");
    e.component = std::string(component);
    std::size_t start = 0;
    while (start <= features.size()) {
      std::size_t comma = features.find(',', start);
      if (comma == std::string_view::npos) comma = features.size();
      if (comma > start) e.features.emplace(features.substr(start, comma - start));
      start = comma + 1;
    }
    if (e.component.empty() || e.features.empty()) {
      throw ParseError({lineno, 1}, "missing component or features");
    }
    index.add(std::string(where.substr(0, colon)), e);
  }
  return index;
}

FeatureTrace trace_feature(const TraceIndex& trace, std::string_view feature) {
  FeatureTrace out;
  auto it = trace.by_feature.find(std::string(feature));
  if (it == trace.by_feature.end()) return out;
  out.known = true;
  out.locations.assign(it->second.begin(), it->second.end());
  return out;
}

ArtifactTrace trace_artifact(const TraceIndex& trace, std::string_view artifact) {
  ArtifactTrace out;
  auto it = trace.by_artifact.find(std::string(artifact));
  if (it == trace.by_artifact.end()) return out;
  out.known = true;
  out.regions = it->second;
  return out;
}

}  // namespace cgpl
