#include "cgpl/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "cgpl/class_diagram.hpp"
#include "cgpl/composition.hpp"
#include "cgpl/feature_model.hpp"
#include "cgpl/gen_cache.hpp"
#include "cgpl/generation.hpp"
#include "cgpl/reference_pl.hpp"
#include "cgpl/variant_spec.hpp"

namespace cgpl {

namespace fs = std::filesystem;

int exit_code_for(std::string_view code) {
  if (code.starts_with("CMP-") || code.starts_with("RES-")) return kExitComposition;
  if (code.starts_with("GEN-")) return kExitGeneration;
  return kExitConfig;
}

namespace {

/// Thrown for missing files and bad flag combinations.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  std::string config;
  std::string spec;
  bool list = false;
  bool incremental = false;
  std::string cache;
  std::string feature;
  std::string artifact;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string with_file(const fs::path& path, const ParseError& e) {
  return path.string() + ":" + e.what();
}

std::shared_ptr<const FeatureModel> load_model(const Options& opt) {
  if (opt.model.empty()) return reference_feature_model();
  std::string text = read_text(opt.model);
  try {
    return std::make_shared<const FeatureModel>(parse_feature_model(text));
  } catch (const ParseError& e) {
    throw ConfigError("FML-SYNTAX", with_file(opt.model, e));
  }
}

struct LoadedSpec {
  VariantSpec spec;
  fs::path diagram_path;
};

/// Relative paths inside a VSP file are taken relative to that file.
LoadedSpec load_spec(const Options& opt) {
  if (opt.spec.empty()) throw UsageError("this command needs -s/--spec");
  fs::path spec_path(opt.spec);
  std::string text = read_text(spec_path);
  LoadedSpec loaded;
  try {
    loaded.spec = parse_variant_spec(text);
  } catch (const ParseError& e) {
    throw ConfigError("VSP-SYNTAX", with_file(spec_path, e));
  }
  fs::path base = spec_path.parent_path();
  auto anchor = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  loaded.diagram_path = anchor(loaded.spec.model_path);
  loaded.spec.output_path = anchor(loaded.spec.output_path).string();
  return loaded;
}

void print_violations(const ValidationReport& report, std::ostream& err) {
  for (const auto& v : report.violations) err << "error: " << to_string(v) << "\n";
}

int fail_with(const ValidationReport& report, std::ostream& err) {
  print_violations(report, err);
  return exit_code_for(report.violations.front().code);
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  auto model = load_model(opt);
  ValidationReport report = validate_configuration(*model, parse_configuration_list(opt.config));
  if (report.valid()) {
    out << "valid\n";
    return kExitOk;
  }
  out << "invalid\n";
  return fail_with(report, err);
}

int cmd_enumerate(const Options& opt, std::ostream& out, std::ostream&) {
  auto model = load_model(opt);
  EnumerationResult result = enumerate_configurations(*model, opt.list);
  out << result.count << "\n";
  if (result.configurations) {
    for (const auto& c : *result.configurations) out << join_configuration(c) << "\n";
  }
  return kExitOk;
}

/// Shared front half of derive and generate. Returns an exit code on
/// failure, nullopt when the variant is ready to run.
struct Derived {
  std::optional<ComponentRegistry> registry;
  std::optional<ComposedGenerator> composed;
};

std::optional<int> derive_variant(const Options& opt, const VariantSpec& spec, Derived& d,
                                  std::ostream& err) {
  auto model = load_model(opt);
  ValidationReport cfg = validate_configuration(*model, spec.configuration);
  if (!cfg.valid()) return fail_with(cfg, err);

  try {
    d.registry.emplace(build_reference_registry(model));
  } catch (const RegistrationError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
    return kExitConfig;
  }
  ValidationReport bindings = check_bindings(spec, *d.registry);
  if (!bindings.valid()) return fail_with(bindings, err);

  d.composed.emplace(compose_variant(*d.registry, spec));
  ValidationReport composition = validate_composition(*d.composed, spec);
  if (!composition.valid()) return fail_with(composition, err);
  return std::nullopt;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

int cmd_derive(const Options& opt, std::ostream& out, std::ostream& err) {
  LoadedSpec loaded = load_spec(opt);
  const VariantSpec& spec = loaded.spec;
  Derived d;
  if (auto code = derive_variant(opt, spec, d, err)) return *code;
  const ComposedGenerator& g = *d.composed;

  out << "variant " << spec.name << "\n";
  out << "mode: " << to_string(spec.mode) << "\n";
  out << "components:";
  for (const auto& c : g.components) out << " " << c->id;
  out << "\noptions:\n";
  for (const auto& [name, value] : qualified_options(g, spec)) {
    out << "  " << name << " = " << to_string(value) << "\n";
  }
  out << "variation points:\n";
  for (const auto& c : g.components) {
    for (const auto& [name, text] : effective_variation_points(*c, spec)) {
      out << "  " << c->id << "." << name << " = " << quoted(text) << "\n";
    }
  }
  out << "schedule:\n";
  for (const auto& e : schedule(g, spec)) {
    out << "  " << to_string(e.phase) << " " << e.component << "." << e.behavior << "\n";
  }
  return kExitOk;
}

int cmd_generate(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.incremental && opt.cache.empty()) throw UsageError("--incremental needs --cache");
  LoadedSpec loaded = load_spec(opt);
  const VariantSpec& spec = loaded.spec;
  Derived d;
  if (auto code = derive_variant(opt, spec, d, err)) return *code;

  std::string source = read_text(loaded.diagram_path);
  ClassDiagram diagram;
  try {
    diagram = parse_class_diagram(source);
  } catch (const ParseError& e) {
    throw ConfigError("CDL-SYNTAX", with_file(loaded.diagram_path, e));
  }

  GenerationReport report;
  if (!opt.cache.empty()) {
    // Without --incremental the run starts cold but still records a cache.
    GenCache cache = opt.incremental ? GenCache::load(opt.cache) : GenCache{};
    auto [result, next] = incremental_generate(*d.composed, diagram, spec, cache);
    report = std::move(result);
    if (report.ok()) next.save(opt.cache);
  } else {
    report = generate(*d.composed, diagram, spec);
  }
  if (!report.ok()) return fail_with(report.violations, err);

  out << "written: " << report.written.size() << "\n";
  for (const auto& p : report.written) out << "  " << p << "\n";
  out << "cache hits: " << report.skipped_cache_hits.size() << "\n";
  for (const auto& p : report.skipped_cache_hits) out << "  " << p << "\n";
  out << "facts: " << report.facts_count << "\n";
  return kExitOk;
}

std::string range_text(const LineRange& r) {
  return std::to_string(r.first) + "-" + std::to_string(r.last);
}

int cmd_trace(const Options& opt, std::ostream& out, std::ostream&) {
  if (opt.feature.empty() == opt.artifact.empty()) {
    throw UsageError("trace needs exactly one of --feature and --artifact");
  }
  LoadedSpec loaded = load_spec(opt);
  fs::path map_path = fs::path(loaded.spec.output_path) / kTraceFileName;
  TraceIndex trace;
  try {
    trace = TraceIndex::parse(read_text(map_path));
  } catch (const ParseError& e) {
    throw IoError("corrupt trace " + with_file(map_path, e));
  }

  if (!opt.feature.empty()) {
    FeatureTrace t = trace_feature(trace, opt.feature);
    if (!t.known) {
      out << "unknown feature " << opt.feature << "\n";
      return kExitOk;
    }
    for (const auto& loc : t.locations) {
      out << loc.artifact << ":" << range_text(loc.lines) << "\n";
    }
    return kExitOk;
  }
  ArtifactTrace t = trace_artifact(trace, opt.artifact);
  if (!t.known) {
    out << "unknown artifact " << opt.artifact << "\n";
    return kExitOk;
  }
  for (const auto& e : t.regions) {
    out << range_text(e.lines) << " " << e.component;
    std::string sep = " ";
    for (const auto& f : e.features) {
      out << sep << f;
      sep = ",";
    }
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Component-based code generator product line", "cgpl"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("-m,--model", opt.model, "feature model (FML); default: built-in model");
  };
  auto add_spec = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("-s,--spec", opt.spec, "variant spec file (VSP)");
    if (required) o->required();
  };

  auto* validate = app.add_subcommand("validate", "check a configuration against the model");
  add_model(validate);
  validate->add_option("-c,--config", opt.config, "comma-separated feature ids")->required();

  auto* enumerate = app.add_subcommand("enumerate", "count (and list) valid configurations");
  add_model(enumerate);
  enumerate->add_flag("--list", opt.list, "print every configuration");

  auto* derive = app.add_subcommand("derive", "compose and print the generator plan");
  add_model(derive);
  add_spec(derive, true);

  auto* gen = app.add_subcommand("generate", "run the composed generator");
  add_model(gen);
  add_spec(gen, true);
  gen->add_flag("--incremental", opt.incremental, "reuse unchanged artifacts");
  gen->add_option("--cache", opt.cache, "directory holding gencache.map");

  auto* trace = app.add_subcommand("trace", "query trace.map of a generated variant");
  add_spec(trace, true);
  trace->add_option("--feature", opt.feature, "feature id");
  trace->add_option("--artifact", opt.artifact, "artifact path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt, out, err);
    if (enumerate->parsed()) return cmd_enumerate(opt, out, err);
    if (derive->parsed()) return cmd_derive(opt, out, err);
    if (gen->parsed()) return cmd_generate(opt, out, err);
    return cmd_trace(opt, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const CompositionFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitComposition;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace cgpl
