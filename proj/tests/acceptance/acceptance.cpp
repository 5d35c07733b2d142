// Acceptance gate: runs the nine primary criteria and prints one
// [PASS]/[FAIL] line per criterion. Exit status is non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cgpl/cli.hpp"
#include "cgpl/composition.hpp"
#include "cgpl/generation.hpp"
#include "cgpl/reference_pl.hpp"
#include "support.hpp"

using namespace cgpl;
namespace fs = std::filesystem;
namespace t = cgpl::testing;

namespace {

using Clock = std::chrono::steady_clock;

// Wall-clock limits per criterion; zero means none.
constexpr double kLimitEnumerationSec = 1.0;
constexpr double kLimitToggleSec = 10.0;
constexpr double kLimitIncrementalSec = 10.0;
constexpr int kPermutationRounds = 10;
constexpr unsigned kPermutationSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

const ComponentRegistry& registry() {
  static const ComponentRegistry r = build_reference_registry();
  return r;
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::vector<std::string> names_of(const std::map<std::string, std::string>& tree) {
  std::vector<std::string> out;
  for (const auto& [k, v] : tree) out.push_back(k);
  return out;
}

// --- 1 -------------------------------------------------------------------

Outcome enumeration_oracle() {
  Outcome o;
  const FeatureModel& model = registry().feature_model();
  EnumerationResult r = enumerate_configurations(model);
  if (r.count != 32) o.fail("enumerate_configurations returned " + std::to_string(r.count));

  const auto& features = t::kReferenceFeatures;
  int disagreements = 0;
  for (unsigned mask = 0; mask < (1u << features.size()); ++mask) {
    Configuration c;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (mask & (1u << i)) c.selected.insert(features[i]);
    }
    bool expected = t::reference_oracle(c.selected);
    if (validate_configuration(model, c).valid() != expected) {
      if (disagreements++ == 0) o.fail("disagreement on {" + join_configuration(c) + "}");
    }
  }
  if (o.pass) o.detail = "32 configurations, 256/256 subsets agree with the oracle";
  return o;
}

// --- 2 and 3 ---------------------------------------------------------------

struct VariantResult {
  Configuration config;
  bool generated = false;
  std::string outcome;  // canonical bytes of the observable result
  t::VariantRun run;
};

std::string render_outcome(const t::VariantRun& run) {
  std::ostringstream s;
  if (!run.composition.valid()) {
    s << "composition refused\n";
    for (const auto& v : run.composition.violations) s << to_string(v) << "\n";
  } else if (!run.generated()) {
    s << "generation failed\n";
    for (const auto& v : run.report->violations.violations) s << to_string(v) << "\n";
  } else {
    for (const auto& [path, content] : run.files) s << "== " << path << "\n" << content;
  }
  return s.str();
}

std::vector<VariantResult>& toggle_variants() {
  static std::vector<VariantResult> variants = [] {
    std::vector<VariantResult> out;
    const ClassDiagram covering = t::covering_diagram();
    const auto mode = BindingMode::GenerationTime;
    for (const auto& config : t::reference_configurations()) {
      t::TempDir dir;
      VariantSpec spec = t::make_spec(config, mode, dir / "out");
      VariantResult r;
      r.config = config;
      r.run = t::run_variant(registry(), t::project_diagram(covering, config, mode), spec);
      r.generated = r.run.generated();
      r.outcome = render_outcome(r.run);
      out.push_back(std::move(r));
    }
    return out;
  }();
  return variants;
}

Outcome requirement_two_effect() {
  Outcome o;
  auto& variants = toggle_variants();
  if (variants.size() != 32) {
    o.fail("expected 32 configurations, got " + std::to_string(variants.size()));
    return o;
  }
  std::map<std::set<std::string>, const VariantResult*> by_selection;
  for (const auto& v : variants) by_selection[v.config.selected] = &v;

  int pairs = 0, changed = 0, refused_pairs = 0;
  std::vector<std::string> unchanged;
  for (const auto& v : variants) {
    for (const auto& f : t::kOptionalFeatures) {
      if (v.config.has(f)) continue;  // visit each pair once, from the side without f
      std::set<std::string> with = v.config.selected;
      with.insert(f);
      auto it = by_selection.find(with);
      if (it == by_selection.end()) {
        o.fail("toggling " + f + " on {" + join_configuration(v.config) + "} leaves the 32");
        continue;
      }
      ++pairs;
      if (!v.generated && !it->second->generated) ++refused_pairs;
      if (v.outcome != it->second->outcome) {
        ++changed;
      } else {
        unchanged.push_back(f + " on {" + join_configuration(v.config) + "}");
      }
    }
  }
  int generated = static_cast<int>(
      std::count_if(variants.begin(), variants.end(), [](const auto& v) { return v.generated; }));
  std::string summary = std::to_string(changed) + "/" + std::to_string(pairs) +
                        " toggles change the output; " + std::to_string(generated) +
                        "/32 configurations generate, " + std::to_string(refused_pairs) +
                        " pairs have both sides refused by composition";
  if (!unchanged.empty()) {
    o.fail(summary + "; unchanged: " + unchanged.front() +
           (unchanged.size() > 1 ? " (+" + std::to_string(unchanged.size() - 1) + " more)" : ""));
  } else if (o.pass) {
    o.detail = summary;
  }
  return o;
}

Outcome traceability_totality() {
  Outcome o;
  int checked = 0;
  for (const auto& v : toggle_variants()) {
    if (!v.generated) continue;
    ++checked;
    const GenerationReport& report = *v.run.report;
    std::string problem = t::check_trace_totality(report.trace, v.run.files, v.config);
    if (!problem.empty()) {
      o.fail("{" + join_configuration(v.config) + "}: " + problem);
      continue;
    }
    auto map = v.run.files.find(std::string(kTraceFileName));
    if (map == v.run.files.end() || !(TraceIndex::parse(map->second) == report.trace)) {
      o.fail("{" + join_configuration(v.config) + "}: trace.map differs from the in-memory trace");
    }
  }
  if (checked == 0) o.fail("no generated variants to check");
  if (o.pass) o.detail = std::to_string(checked) + " generated variants fully traced";
  return o;
}

// --- 4 -------------------------------------------------------------------

const char* const kShopDiagram = R"(classdiagram Shop {
  class Person { name: string; age: int; }
  class Order { id: int; }
}
)";

std::string shop_vsp(const std::string& extra_lines) {
  return "variant shop {\n"
         "  model: input.cdl;\n"
         "  features: [CD2Java, Types, Class, DefaultConstructor, Builder, Factory];\n" +
         extra_lines +
         "  mode: generation_time;\n"
         "  out: out;\n"
         "}\n";
}

Outcome syntax_gate_atomicity() {
  Outcome o;
  t::TempDir work;
  t::write_file(work / "input.cdl", kShopDiagram);
  t::write_file(work / "good.vsp", shop_vsp(""));
  t::write_file(work / "broken.vsp", shop_vsp("  bind Types.extra_members = \"  int broken() {\\n\";\n"));

  t::CliRun first = t::run_cli_captured({"generate", "-s", (work / "good.vsp").string()});
  if (first.exit_code != kExitOk) {
    o.fail("initial generation failed: " + first.err);
    return o;
  }
  const auto before = t::read_tree(work.path());
  t::CliRun broken = t::run_cli_captured({"generate", "-s", (work / "broken.vsp").string()});
  const auto after = t::read_tree(work.path());

  if (broken.exit_code != kExitGeneration) {
    o.fail("exit code " + std::to_string(broken.exit_code) + ", expected 3");
  }
  if (broken.err.find(std::string(kGenSyntax)) == std::string::npos) {
    o.fail("no " + std::string(kGenSyntax) + " diagnostic: " + broken.err);
  }
  if (after != before) {
    o.fail("working directory changed: before {" + join(names_of(before)) + "} after {" +
           join(names_of(after)) + "}");
  }
  if (o.pass) {
    o.detail = "exit 3 with " + std::string(kGenSyntax) + ", " +
               std::to_string(before.size()) + " entries byte-identical";
  }
  return o;
}

// --- 5 -------------------------------------------------------------------

Outcome overwrite_prevention() {
  Outcome o;
  t::TempDir dir;
  VariantSpec spec = t::make_spec(make_configuration({"CD2Java", "Types", "Class"}),
                                  BindingMode::GenerationTime, dir / "out");
  GeneratorComponent intruder;
  intruder.id = "Intruder";
  intruder.version = "1";
  intruder.interface.concerns = {{"intrusion", "claims an artifact Types owns"}};
  intruder.interface.produces = {FactTopic::ArtifactClaimed};
  // Consuming type.generated schedules it after Types, so Types holds the claim.
  intruder.interface.consumes = {FactTopic::TypeGenerated};
  intruder.behaviors.push_back({"claim_person", Phase::Declare, Formula::constant(true),
                                [](BehaviorContext& ctx) { ctx.claim("Person.oo"); }});
  ComposedGenerator g =
      compose(compose_variant(registry(), spec),
              as_composed(std::make_shared<const GeneratorComponent>(std::move(intruder)),
                          registry().feature_model_ptr()));
  GenerationReport r = generate(g, parse_class_diagram(kShopDiagram), spec);

  auto conflict = std::find_if(r.violations.violations.begin(), r.violations.violations.end(),
                               [](const Violation& v) { return v.code == kGenClaimConflict; });
  if (conflict == r.violations.violations.end()) {
    o.fail("no claim conflict reported");
  } else {
    if (conflict->subjects != std::vector<std::string>{"Types", "Intruder"}) {
      o.fail("conflict names {" + join(conflict->subjects) + "}");
    }
    if (conflict->message.find("Intruder") == std::string::npos ||
        conflict->message.find("Types") == std::string::npos) {
      o.fail("message does not name both components: " + conflict->message);
    }
  }
  if (!r.written.empty() || fs::exists(dir / "out")) o.fail("files were written");
  if (o.pass) o.detail = to_string(*conflict) + "; nothing written";
  return o;
}

// --- 6 -------------------------------------------------------------------

struct Edit {
  std::string name;
  std::string diagram;
  std::vector<VariationPointBinding> vps;
};

Outcome incremental_equivalence() {
  Outcome o;
  const std::string base = R"(classdiagram Shop {
  class Person { name: string; age: int; }
  class Order { id: int; }
}
)";
  auto replace = [](std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  const std::string renamed = replace(base, "name: string;", "fullName: string;");
  const std::string added = replace(renamed, "}\n}\n", "}\n  class Item { sku: string; }\n}\n");
  const std::string removed = replace(added, "  class Order { id: int; }\n", "");
  const std::string retagged = replace(removed, "  class Item", "  <<nobuilder>> class Item");
  const std::vector<VariationPointBinding> prefix = {{"Factory", "factory_method_prefix", "make%s"}};
  const std::vector<Edit> edits = {
      {"rename attribute", renamed, {}},
      {"add class", added, {}},
      {"remove class", removed, {}},
      {"retag class", retagged, {}},
      {"change variation point", retagged, prefix},
      {"no change", retagged, prefix},
  };

  t::TempDir dir;
  Configuration config =
      make_configuration({"CD2Java", "Types", "Class", "DefaultConstructor", "Builder", "Factory"});
  VariantSpec inc = t::make_spec(config, BindingMode::GenerationTime, dir / "inc");
  auto [initial, cache] =
      incremental_generate(compose_variant(registry(), inc), parse_class_diagram(base), inc, {});
  if (!initial.ok()) {
    o.fail("initial generation failed");
    return o;
  }

  std::vector<std::string> notes;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const Edit& e = edits[i];
    VariantSpec spec = inc;
    spec.vp_bindings = e.vps;
    VariantSpec cold = spec;
    cold.output_path = (dir / ("cold" + std::to_string(i))).string();
    ComposedGenerator g = compose_variant(registry(), spec);
    ClassDiagram d = parse_class_diagram(e.diagram);

    auto [report, next] = incremental_generate(g, d, spec, cache);
    GenerationReport full = generate(g, d, cold);
    if (!report.ok() || !full.ok()) {
      o.fail(e.name + ": generation failed");
      return o;
    }
    if (t::read_tree(inc.output_path) != t::read_tree(cold.output_path)) {
      o.fail(e.name + ": incremental output differs from cold generation");
    }
    const auto& hits = report.skipped_cache_hits;
    if (i == 0 && std::find(hits.begin(), hits.end(), "ShopFactory.oo") == hits.end()) {
      o.fail("rename attribute: ShopFactory.oo was not a cache hit (hits: " + join(hits) + ")");
    }
    notes.push_back(e.name + " " + std::to_string(report.written.size()) + "w/" +
                    std::to_string(hits.size()) + "h");
    cache = std::move(next);
  }
  if (o.pass) o.detail = join(notes);
  return o;
}

// --- 7 -------------------------------------------------------------------

Outcome permutation_determinism() {
  Outcome o;
  Configuration config = make_configuration({"CD2Java", "Types", "Class", "Enum", "Interface",
                                             "DefaultConstructor", "Builder", "Factory"});
  VariantSpec spec = t::make_spec(config, BindingMode::RunTime, "");
  const ClassDiagram diagram = t::covering_diagram();
  // <<external>> only makes sense in hybrid mode; the projection strips it.
  const ClassDiagram input = t::project_diagram(diagram, config, spec.mode);

  std::vector<ComponentPtr> components;
  for (const auto& [id, c] : registry().components()) components.push_back(c);

  std::optional<Schedule> first_schedule;
  std::optional<std::map<std::string, std::string>> first_files;
  std::mt19937 rng(kPermutationSeed);
  std::set<std::vector<std::string>> orders;
  for (int round = 0; round < kPermutationRounds; ++round) {
    std::shuffle(components.begin(), components.end(), rng);
    std::vector<std::string> order;
    for (const auto& c : components) order.push_back(c->id);
    orders.insert(order);

    ComposedGenerator g = compose_all(components, registry().feature_model_ptr());
    t::TempDir dir;
    VariantSpec s = spec;
    s.output_path = (dir / "out").string();
    Schedule sched = schedule(g, s);
    GenerationReport r = generate(g, input, s);
    if (!r.ok()) {
      o.fail("order " + join(order) + ": generation failed");
      continue;
    }
    auto files = t::read_tree(dir / "out");
    if (!first_schedule) {
      first_schedule = sched;
      first_files = files;
    } else {
      if (sched != *first_schedule) o.fail("order " + join(order) + ": schedule differs");
      if (files != *first_files) o.fail("order " + join(order) + ": output differs");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(kPermutationRounds) + " orders (" + std::to_string(orders.size()) +
               " distinct), " + std::to_string(first_schedule->size()) + " behaviors, " +
               std::to_string(first_files->size()) + " files identical";
  }
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome binding_modes() {
  Outcome o;
  std::vector<std::string> notes;

  for (const char* name : {"run_time", "hybrid"}) {
    t::TempDir work;
    t::GoldenRun run = t::run_golden(name, work.path());
    if (run.cli.exit_code != kExitOk) {
      o.fail(std::string(name) + ": exit " + std::to_string(run.cli.exit_code) + " " + run.cli.err);
    } else if (run.files != run.expected) {
      o.fail(std::string(name) + ": output differs from the golden files");
    } else {
      notes.push_back(std::string(name) + " golden matches");
    }
  }

  // With hooks enabled every provider interface is an artifact.
  {
    t::TempDir work;
    t::GoldenRun run = t::run_golden("run_time", work.path());
    for (const char* provider : {"PersonProvider.oo", "OrderProvider.oo"}) {
      if (!run.files.count(provider)) o.fail(std::string("run_time: missing ") + provider);
    }
  }

  // Hooks suppressed: resolution fails and lists the unmatched subjects.
  {
    t::TempDir work;
    fs::path golden = t::test_root() / "golden" / "run_time";
    fs::copy_file(golden / "input.cdl", work / "input.cdl");
    std::string vsp = t::read_file(golden / "variant.vsp");
    vsp.replace(vsp.find("  mode:"), 0, "  option Types.provide_hooks = false;\n");
    t::write_file(work / "variant.vsp", vsp);
    t::CliRun r = t::run_cli_captured({"generate", "-s", (work / "variant.vsp").string()});
    if (r.exit_code != kExitGeneration) {
      o.fail("hooks suppressed: exit " + std::to_string(r.exit_code) + ", expected 3");
    }
    for (const char* subject : {"PersonProvider unresolved", "OrderProvider unresolved"}) {
      if (r.err.find(subject) == std::string::npos) {
        o.fail(std::string("hooks suppressed: '") + subject + "' not reported");
      }
    }
    if (fs::exists(work / "out")) o.fail("hooks suppressed: output was written");
    notes.push_back("suppressed hooks exit " + std::to_string(r.exit_code));
  }

  // Hybrid delegates exactly the <<external>> classes.
  {
    t::TempDir dir;
    Configuration config =
        make_configuration({"CD2Java", "Types", "Class", "DefaultConstructor", "Factory"});
    VariantSpec spec = t::make_spec(config, BindingMode::Hybrid, dir / "out");
    ClassDiagram d = t::project_diagram(t::covering_diagram(), config, spec.mode);
    t::VariantRun run = t::run_variant(registry(), d, spec);
    std::set<std::string> external, required;
    for (const ClassDecl* c : d.classes()) {
      if (std::count(c->tags.begin(), c->tags.end(), kTagExternal)) {
        external.insert(c->name + "Provider");
      }
    }
    if (!run.generated()) {
      o.fail("hybrid covering run failed");
    } else {
      for (const auto& f : run.report->board.query(FactTopic::HookRequired)) {
        required.insert(f.subject);
      }
      if (external.empty() || required != external) o.fail("hybrid delegates the wrong classes");
      notes.push_back("hybrid delegates {" + join({required.begin(), required.end()}) + "}");
    }
  }
  if (o.pass) o.detail = join(notes, "; ");
  return o;
}

// --- 9 -------------------------------------------------------------------

Outcome interface_constraints() {
  Outcome o;
  VariantSpec spec = t::make_spec(make_configuration({"CD2Java", "Types", "Class", "Builder"}),
                                  BindingMode::GenerationTime, "out");
  if (!validate_configuration(registry().feature_model(), spec.configuration).valid()) {
    o.fail("feature-model validation rejected the selection");
  }
  ValidationReport r = validate_composition(compose_variant(registry(), spec), spec);
  auto hit = std::find_if(r.violations.begin(), r.violations.end(), [](const Violation& v) {
    return v.code == kCmpConstraint &&
           std::find(v.subjects.begin(), v.subjects.end(), "Builder") != v.subjects.end();
  });
  if (hit == r.violations.end()) o.fail("no CMP-CONSTRAINT naming Builder");

  t::CliRun cli = t::run_cli_captured(
      {"derive", "-s", (t::test_root().parent_path() / "data" / "builder_without_constructor.vsp")
                           .string()});
  if (cli.exit_code != kExitComposition) {
    o.fail("cgpl derive exited " + std::to_string(cli.exit_code) + ", expected 2");
  }
  if (o.pass) o.detail = "feature model accepts, composition reports " + to_string(*hit);
  return o;
}

struct Criterion {
  int number;
  const char* name;
  double limit_sec;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "enumeration-oracle", kLimitEnumerationSec, enumeration_oracle},
      {2, "requirement-2-effect", kLimitToggleSec, requirement_two_effect},
      {3, "traceability-totality", 0, traceability_totality},
      {4, "syntax-gate-atomicity", 0, syntax_gate_atomicity},
      {5, "overwrite-prevention", 0, overwrite_prevention},
      {6, "incremental-equivalence", kLimitIncrementalSec, incremental_equivalence},
      {7, "permutation-determinism", 0, permutation_determinism},
      {8, "binding-modes", 0, binding_modes},
      {9, "interface-constraints", 0, interface_constraints},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double sec = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_sec > 0 && sec >= c.limit_sec) {
      o.fail("took " + std::to_string(sec) + " s, limit " + std::to_string(c.limit_sec) + " s; " +
             o.detail);
    }
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", sec);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.number << " " << c.name << ": "
              << o.detail << " (" << timing << ")" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
