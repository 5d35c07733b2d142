#include "cgpl/generation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cgpl/ootl_syntax.hpp"

namespace cgpl {

namespace fs = std::filesystem;

struct ComponentSettings {
  OptionMap options;
  VariationPointMap variation_points;
};

struct RunState {
  const ComposedGenerator& composed;
  const VariantSpec& spec;
  ClassDiagram diagram;
  Blackboard board;
  ValidationReport violations;
  std::vector<ContextCondition> conditions;
  std::map<std::string, ComponentSettings> settings;
  std::map<std::string, ArtifactContainer> containers;
  std::map<std::string, CacheEntry> new_entries;
  std::set<std::string> hits;
  std::set<std::string> misses;
  const GenCache* cache = nullptr;
  fs::path out_dir;
  TraceIndex previous_trace;
};

namespace {

std::string read_file(const fs::path& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  ok = static_cast<bool>(in);
  if (!ok) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

bool plain_artifact_name(const std::string& path) {
  return !path.empty() && path.find('/') == std::string::npos &&
         path.find('\\') == std::string::npos && path != "." && path != ".." &&
         path != kTraceFileName;
}

fs::path normalize_output(const std::string& out) {
  fs::path p = fs::absolute(fs::path(out)).lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p;
}

/// The output directory is replaced wholesale, so refuse to touch one
/// holding anything the generator did not put there.
void check_ownership(const fs::path& out) {
  std::error_code ec;
  if (!fs::exists(out, ec)) return;
  if (!fs::is_directory(out, ec)) {
    throw IoError("output path " + out.string() + " exists and is not a directory");
  }
  for (const auto& entry : fs::directory_iterator(out, ec)) {
    const fs::path& p = entry.path();
    bool ours = entry.is_regular_file() &&
                (p.extension() == ".oo" || p.filename() == kTraceFileName);
    if (!ours) {
      throw IoError("refusing to replace " + out.string() + ": it contains " +
                    p.filename().string() + ", which the generator did not write");
    }
  }
  if (ec) throw IoError("cannot read output directory " + out.string() + ": " + ec.message());
}

/// Rebuilds a container from the previous output when its bytes still
/// match the cached digest and the previous trace covers it exactly.
std::optional<ArtifactContainer> reuse_previous(const RunState& st, const std::string& path,
                                                const std::string& content_digest) {
  bool ok = false;
  std::string content = read_file(st.out_dir / path, ok);
  if (!ok || sha256_hex(content) != content_digest) return std::nullopt;
  auto it = st.previous_trace.by_artifact.find(path);
  if (it == st.previous_trace.by_artifact.end()) return std::nullopt;

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t eol = content.find('\n', start);
    if (eol == std::string::npos) return std::nullopt;  // not whole lines
    lines.push_back(content.substr(start, eol - start + 1));
    start = eol + 1;
  }

  ArtifactContainer c(path);
  std::size_t next = 1;
  for (const auto& e : it->second) {
    if (e.lines.first != next || e.lines.last > lines.size()) return std::nullopt;
    std::string text;
    for (std::size_t l = e.lines.first; l <= e.lines.last; ++l) text += lines[l - 1];
    c.append(text, e.features, e.component);
    next = e.lines.last + 1;
  }
  if (next != lines.size() + 1) return std::nullopt;
  return c;
}

void write_output(const RunState& st, const TraceIndex& trace) {
  const fs::path& out = st.out_dir;
  fs::path parent = out.parent_path();
  std::string name = out.filename().string();
  fs::path staging = parent / ("." + name + ".staging");
  fs::path backup = parent / ("." + name + ".previous");
  try {
    fs::create_directories(parent);
    fs::remove_all(staging);
    fs::create_directory(staging);
    for (const auto& [path, container] : st.containers) {
      fs::path target = staging / path;
      if (st.hits.count(path)) {
        std::error_code ec;
        fs::create_hard_link(out / path, target, ec);
        if (!ec) continue;
      }
      write_file(target, container.content());
    }
    write_file(staging / kTraceFileName, trace.serialize());
    if (fs::exists(out)) {
      fs::remove_all(backup);
      fs::rename(out, backup);
      fs::rename(staging, out);
      fs::remove_all(backup);
    } else {
      fs::rename(staging, out);
    }
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("writing output failed: ") + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// BehaviorContext

BehaviorContext::BehaviorContext(RunState& run, const GeneratorComponent& component, Phase phase)
    : run_(run), component_(component), phase_(phase), view_(run.board, component, run.violations) {}

const VariantSpec& BehaviorContext::spec() const { return run_.spec; }
BindingMode BehaviorContext::mode() const { return run_.spec.mode; }
bool BehaviorContext::selected(std::string_view feature) const {
  return run_.spec.configuration.has(feature);
}

const OptionMap& BehaviorContext::options() const { return run_.settings.at(component_.id).options; }

bool BehaviorContext::flag(std::string_view option) const {
  const OptionMap& opts = options();
  auto it = opts.find(std::string(option));
  if (it == opts.end() || !std::holds_alternative<bool>(it->second)) {
    throw std::logic_error(component_.id + " has no flag option " + std::string(option));
  }
  return std::get<bool>(it->second);
}

const std::string& BehaviorContext::variation_point(std::string_view name) const {
  const auto& vps = run_.settings.at(component_.id).variation_points;
  auto it = vps.find(std::string(name));
  if (it == vps.end()) {
    throw std::logic_error(component_.id + " has no variation point " + std::string(name));
  }
  return it->second;
}

const ClassDiagram& BehaviorContext::diagram() const { return run_.diagram; }

ClassDiagram& BehaviorContext::mutable_diagram() {
  if (phase_ != Phase::Transform) {
    throw std::logic_error("the diagram may only be rewritten in the transform phase");
  }
  return run_.diagram;
}

bool BehaviorContext::require_phase(Phase wanted, std::string_view operation) {
  if (phase_ == wanted) return true;
  report({std::string(kGenPhase), {component_.id},
          component_.id + " attempted " + std::string(operation) + " during " +
              std::string(to_string(phase_)) + "; allowed only during " +
              std::string(to_string(wanted)),
          {}});
  return false;
}

void BehaviorContext::add_condition(ContextCondition condition) {
  if (!require_phase(Phase::Restrict, "to add a context condition")) return;
  if (condition.origin.empty()) condition.origin = component_.id;
  run_.conditions.push_back(std::move(condition));
}

bool BehaviorContext::claim(const std::string& path) {
  if (!require_phase(Phase::Declare, "to claim " + path)) return false;
  if (!plain_artifact_name(path)) {
    report({std::string(kGenUnclaimed), {component_.id},
            component_.id + " claimed '" + path + "', which is not a plain artifact file name",
            {}});
    return false;
  }
  if (auto conflict = claim_artifact(run_.board, path, component_.id)) {
    report({std::string(kGenClaimConflict), {conflict->holder, conflict->claimant},
            conflict->message(), {}});
    return false;
  }
  return true;
}

bool BehaviorContext::publish(FactTopic topic, std::string subject, Payload payload) {
  if (!require_phase(Phase::Declare, "to publish " + std::string(to_string(topic)))) return false;
  return view_.publish(topic, std::move(subject), std::move(payload));
}

std::vector<Fact> BehaviorContext::facts(FactTopic topic, const std::optional<std::string>& subject) {
  return view_.read(topic, subject);
}

void BehaviorContext::report(Violation violation) { run_.violations.add(std::move(violation)); }

void BehaviorContext::emit_artifact(const ArtifactRequest& request, const EmitFn& emit) {
  if (!require_phase(Phase::Emit, "to emit " + request.path)) return;
  const auto& claims = run_.board.claims();
  auto owner = claims.find(request.path);
  if (owner == claims.end() || owner->second != component_.id) {
    report({std::string(kGenUnclaimed), {component_.id},
            component_.id + " emitted " + request.path + " without claiming it", {}});
    return;
  }
  if (run_.containers.count(request.path)) {
    report({std::string(kGenDuplicateEmit), {component_.id},
            request.path + " emitted twice", {}});
    return;
  }

  std::vector<Fact> facts;
  for (const auto& q : request.facts) {
    auto found = view_.read(q.topic, q.subject);
    facts.insert(facts.end(), found.begin(), found.end());
  }
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());

  const ComponentSettings& settings = run_.settings.at(component_.id);
  CacheKeyInput key_input{request.path,
                          component_.id,
                          component_.version,
                          run_.spec.mode,
                          settings.options,
                          settings.variation_points,
                          "package " + run_.diagram.name + "\n" + request.input_text,
                          facts};
  std::string key = compute_key_digest(key_input);

  if (run_.cache) {
    auto entry = run_.cache->entries.find(request.path);
    if (entry != run_.cache->entries.end() && entry->second.key_digest == key) {
      if (auto reused = reuse_previous(run_, request.path, entry->second.content_digest)) {
        run_.containers.emplace(request.path, std::move(*reused));
        run_.hits.insert(request.path);
        run_.new_entries[request.path] = entry->second;
        return;
      }
    }
  }

  ArtifactContainer container(request.path);
  emit(container, facts);
  run_.new_entries[request.path] = {key, sha256_hex(container.content())};
  run_.containers.emplace(request.path, std::move(container));
  run_.misses.insert(request.path);
}

// ---------------------------------------------------------------------------
// Engine

ValidationReport resolve_hooks(const Blackboard& board, BindingMode mode) {
  ValidationReport report;
  if (mode == BindingMode::GenerationTime) return report;
  std::set<std::string> provided;
  for (const auto& f : board.query(FactTopic::HookProvided)) provided.insert(f.subject);
  std::set<std::string> reported;
  for (const auto& f : board.query(FactTopic::HookRequired)) {
    if (provided.count(f.subject) || !reported.insert(f.subject).second) continue;
    report.add({std::string(kGenHookUnresolved), {f.subject},
                f.subject + " unresolved (required by " + f.producer + ")", {}});
  }
  return report;
}

namespace {

GenerationReport run_generation(const ComposedGenerator& composed, const ClassDiagram& diagram,
                                const VariantSpec& spec, const GenCache* cache,
                                GenCache* next_cache) {
  RunState st{composed, spec, diagram, {}, {}, {}, {}, {}, {}, {}, {}, cache, {}, {}};
  st.out_dir = normalize_output(spec.output_path);
  check_ownership(st.out_dir);

  const Schedule plan = schedule(composed, spec);
  for (const auto& c : composed.components) {
    st.settings[c->id] = {effective_configuration(*c, spec), effective_variation_points(*c, spec)};
  }
  if (cache) {
    bool ok = false;
    std::string text = read_file(st.out_dir / kTraceFileName, ok);
    if (ok) {
      try {
        st.previous_trace = TraceIndex::parse(text);
      } catch (const ParseError&) {
        // A damaged trace only costs cache hits.
      }
    }
  }

  GenerationReport report;
  auto finish_failed = [&]() {
    report.violations = std::move(st.violations);
    report.facts_count = st.board.facts().size();
    report.board = std::move(st.board);
    return std::move(report);
  };

  auto run_phase = [&](Phase phase) {
    for (const auto& entry : plan) {
      if (entry.phase != phase) continue;
      ComponentPtr c = composed.find(entry.component);
      auto b = std::find_if(c->behaviors.begin(), c->behaviors.end(),
                            [&](const Behavior& x) { return x.name == entry.behavior; });
      BehaviorContext ctx(st, *c, phase);
      try {
        b->run(ctx);
      } catch (const std::exception& e) {
        st.violations.add({std::string(kGenBehavior), {c->id},
                           "behavior " + c->id + "." + b->name + " failed: " + e.what(), {}});
      }
    }
    return st.violations.valid();
  };

  if (!run_phase(Phase::Restrict)) return finish_failed();
  try {
    st.violations.merge(check_context_conditions(st.diagram, st.conditions));
  } catch (const std::invalid_argument& e) {
    st.violations.add({std::string(kGenBehavior), {}, e.what(), {}});
  }
  if (!st.violations.valid()) return finish_failed();
  if (!run_phase(Phase::Transform)) return finish_failed();
  if (!run_phase(Phase::Declare)) return finish_failed();
  if (!run_phase(Phase::Emit)) return finish_failed();

  for (auto& [path, container] : st.containers) {
    const SyntaxStatus& status = validate_syntax(container);
    if (!status.valid()) {
      std::set<std::string> owners;
      for (const auto& r : container.regions()) owners.insert(r.component);
      std::vector<std::string> subjects{path};
      subjects.insert(subjects.end(), owners.begin(), owners.end());
      st.violations.add({std::string(kGenSyntax), subjects,
                         "container " + path + " is not valid OOTL at " +
                             to_string(status.where) + ": " + status.message,
                         status.where});
    }
  }
  st.violations.merge(resolve_hooks(st.board, spec.mode));
  if (!st.violations.valid()) return finish_failed();

  for (const auto& [path, container] : st.containers) report.trace.add(container);
  write_output(st, report.trace);

  report.written.assign(st.misses.begin(), st.misses.end());
  report.skipped_cache_hits.assign(st.hits.begin(), st.hits.end());
  report.facts_count = st.board.facts().size();
  report.board = std::move(st.board);
  if (next_cache) next_cache->entries = std::move(st.new_entries);
  return report;
}

}  // namespace

GenerationReport generate(const ComposedGenerator& composed, const ClassDiagram& diagram,
                          const VariantSpec& spec) {
  return run_generation(composed, diagram, spec, nullptr, nullptr);
}

std::pair<GenerationReport, GenCache> incremental_generate(const ComposedGenerator& composed,
                                                           const ClassDiagram& diagram,
                                                           const VariantSpec& spec,
                                                           const GenCache& cache) {
  GenCache next;
  GenerationReport report = run_generation(composed, diagram, spec, &cache, &next);
  if (!report.ok()) return {std::move(report), cache};
  return {std::move(report), std::move(next)};
}

}  // namespace cgpl
