#include "support.hpp"

#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cgpl/artifact.hpp"
#include "cgpl/cli.hpp"

namespace cgpl::testing {

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "cgpl-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    std::string rel = fs::relative(e.path(), dir).string();
    if (e.is_directory()) {
      out[rel + "/"] = "";
    } else {
      out[rel] = read_file(e.path());
    }
  }
  return out;
}

fs::path test_root() { return CGPL_TEST_ROOT; }

const std::vector<std::string> kReferenceFeatures = {
    "CD2Java", "Types", "Class", "Enum", "Interface", "DefaultConstructor", "Builder", "Factory"};

const std::vector<std::string> kOptionalFeatures = {"Enum", "Interface", "DefaultConstructor",
                                                    "Builder", "Factory"};

bool reference_oracle(const std::set<std::string>& s) {
  auto has = [&](const char* f) { return s.count(f) > 0; };
  for (const auto& f : s) {
    if (std::find(kReferenceFeatures.begin(), kReferenceFeatures.end(), f) ==
        kReferenceFeatures.end()) {
      return false;
    }
  }
  if (!has("CD2Java")) return false;
  // Types is a mandatory child of the root, Class a mandatory child of Types.
  if (!has("Types") || !has("Class")) return false;
  // Enum, Interface, DefaultConstructor hang below Types; Builder and
  // Factory below the root, which is always selected here.
  for (const char* f : {"Enum", "Interface", "DefaultConstructor"}) {
    if (has(f) && !has("Types")) return false;
  }
  for (const char* f : {"DefaultConstructor", "Builder", "Factory"}) {
    if (has(f) && !has("Class")) return false;
  }
  return true;
}

std::vector<Configuration> reference_configurations() {
  std::vector<Configuration> out;
  for (unsigned mask = 0; mask < (1u << kReferenceFeatures.size()); ++mask) {
    Configuration c;
    for (std::size_t i = 0; i < kReferenceFeatures.size(); ++i) {
      if (mask & (1u << i)) c.selected.insert(kReferenceFeatures[i]);
    }
    if (reference_oracle(c.selected)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

VariantSpec make_spec(const Configuration& config, BindingMode mode, const fs::path& out,
                      std::vector<OptionBinding> options, std::vector<VariationPointBinding> vps) {
  VariantSpec spec;
  spec.name = "test";
  spec.model_path = "input.cdl";
  spec.configuration = config;
  spec.option_bindings = std::move(options);
  spec.vp_bindings = std::move(vps);
  spec.mode = mode;
  spec.output_path = out.string();
  return spec;
}

VariantRun run_variant(const ComponentRegistry& registry, const ClassDiagram& diagram,
                       const VariantSpec& spec) {
  VariantRun run;
  ComposedGenerator g = compose_variant(registry, spec);
  run.composition = validate_composition(g, spec);
  if (!run.composition.valid()) return run;
  run.report = generate(g, diagram, spec);
  run.files = read_tree(spec.output_path);
  return run;
}

ClassDiagram covering_diagram() {
  return parse_class_diagram(R"(classdiagram Zoo {
  interface Named { name(): string; }
  enum Diet { MEAT, PLANTS }
  class Animal implements Named { name: string; diet: Diet; }
  class Lion extends Animal { mane: boolean; }
  <<nobuilder>> class Keeper { name: string; age: int; }
  <<external>> class Ticket { price: int; }
}
)");
}

ClassDiagram project_diagram(const ClassDiagram& diagram, const Configuration& config,
                             BindingMode mode) {
  ClassDiagram out;
  out.name = diagram.name;
  std::set<std::string> dropped;
  for (const auto& t : diagram.types) {
    if (std::holds_alternative<EnumDecl>(t) && !config.has("Enum")) {
      dropped.insert(decl_name(t));
    } else if (std::holds_alternative<InterfaceDecl>(t) && !config.has("Interface")) {
      dropped.insert(decl_name(t));
    }
  }
  for (const auto& t : diagram.types) {
    if (dropped.count(decl_name(t))) continue;
    if (const auto* c = std::get_if<ClassDecl>(&t)) {
      ClassDecl copy = *c;
      if (!config.has("Interface")) copy.interfaces.clear();
      std::erase_if(copy.attributes,
                    [&](const Attribute& a) { return dropped.count(a.type_name) > 0; });
      std::erase_if(copy.tags, [&](const std::string& tag) {
        return (tag == "nobuilder" && !config.has("Builder")) ||
               (tag == "external" && mode != BindingMode::Hybrid);
      });
      out.types.push_back(copy);
    } else {
      out.types.push_back(t);
    }
  }
  return out;
}

namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

std::string check_trace_totality(const TraceIndex& trace,
                                 const std::map<std::string, std::string>& files,
                                 const Configuration& config) {
  for (const auto& [path, content] : files) {
    if (path == kTraceFileName || path.ends_with("/")) continue;
    auto it = trace.by_artifact.find(path);
    if (it == trace.by_artifact.end()) return path + " has no trace regions";
    std::size_t next = 1;
    for (const auto& e : it->second) {
      if (e.lines.first != next) {
        return path + ": region starts at " + std::to_string(e.lines.first) + ", expected " +
               std::to_string(next);
      }
      if (e.lines.last < e.lines.first) return path + ": empty region";
      if (e.features.empty()) return path + ": region without features";
      for (const auto& f : e.features) {
        if (f != kCoreFeature && !config.has(f)) {
          return path + ": region tagged with unselected feature " + f;
        }
      }
      next = e.lines.last + 1;
    }
    if (next != count_lines(content) + 1) {
      return path + ": regions end at line " + std::to_string(next - 1) + " of " +
             std::to_string(count_lines(content));
    }
  }
  for (const auto& [artifact, entries] : trace.by_artifact) {
    if (!files.count(artifact)) return "trace mentions unwritten artifact " + artifact;
    for (const auto& e : entries) {
      for (const auto& f : e.features) {
        auto fit = trace.by_feature.find(f);
        if (fit == trace.by_feature.end() || !fit->second.count({artifact, e.lines})) {
          return "by_feature misses " + f + " at " + artifact;
        }
      }
    }
  }
  for (const auto& [feature, locations] : trace.by_feature) {
    for (const auto& loc : locations) {
      auto ait = trace.by_artifact.find(loc.artifact);
      bool found = ait != trace.by_artifact.end() &&
                   std::any_of(ait->second.begin(), ait->second.end(), [&](const TraceEntry& e) {
                     return e.lines == loc.lines && e.features.count(feature);
                   });
      if (!found) return "by_artifact misses " + feature + " at " + loc.artifact;
    }
  }
  return {};
}

CliRun run_cli_captured(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun run;
  run.exit_code = run_cli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

GoldenRun run_golden(const std::string& name, const fs::path& work) {
  const fs::path source = test_root() / "golden" / name;
  fs::create_directories(work);
  fs::copy_file(source / "input.cdl", work / "input.cdl", fs::copy_options::overwrite_existing);
  fs::copy_file(source / "variant.vsp", work / "variant.vsp",
                fs::copy_options::overwrite_existing);
  GoldenRun run;
  run.cli = run_cli_captured({"generate", "-s", (work / "variant.vsp").string()});
  run.files = read_tree(work / "out");
  run.expected = read_tree(source / "expected");
  return run;
}

std::vector<std::string> golden_cases() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(test_root() / "golden")) {
    if (e.is_directory()) out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cgpl::testing
