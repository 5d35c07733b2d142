#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgpl/class_diagram.hpp"
#include "cgpl/component.hpp"
#include "cgpl/composition.hpp"
#include "cgpl/generation.hpp"

namespace cgpl::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

/// Relative path -> bytes for every regular file below `dir` (empty map
/// when `dir` does not exist). Directories show up as "<name>/".
std::map<std::string, std::string> read_tree(const fs::path& dir);

/// Source directory of the test data (tests/).
fs::path test_root();

// The eight features of the built-in model, in declaration order.
extern const std::vector<std::string> kReferenceFeatures;
extern const std::vector<std::string> kOptionalFeatures;

/// Membership written directly from the feature tree: CD2Java and its
/// mandatory chain Types/Class are required, DefaultConstructor, Builder
/// and Factory need Class, everything else is free.
bool reference_oracle(const std::set<std::string>& selected);

VariantSpec make_spec(const Configuration& config, BindingMode mode, const fs::path& out,
                      std::vector<OptionBinding> options = {},
                      std::vector<VariationPointBinding> vps = {});

/// Outcome of pushing one variant through composition and generation.
struct VariantRun {
  ValidationReport composition;
  std::optional<GenerationReport> report;  // absent when composition failed
  std::map<std::string, std::string> files;

  bool generated() const { return report && report->ok(); }
};

VariantRun run_variant(const ComponentRegistry& registry, const ClassDiagram& diagram,
                       const VariantSpec& spec);

/// A diagram touching every input concept: an interface, an enum, an
/// implements clause, inheritance and both tags.
ClassDiagram covering_diagram();

/// Drops what a variant's guard conditions would reject: enums (and
/// attributes typed by them) without Enum, interfaces and implements
/// clauses without Interface, <<nobuilder>> without Builder and
/// <<external>> outside hybrid mode.
ClassDiagram project_diagram(const ClassDiagram& diagram, const Configuration& config,
                             BindingMode mode);

/// All 32 valid configurations of the built-in model, via the oracle.
std::vector<Configuration> reference_configurations();

/// Empty string when the trace covers every written file exactly and
/// both indices agree; otherwise a description of the first problem.
std::string check_trace_totality(const TraceIndex& trace,
                                 const std::map<std::string, std::string>& files,
                                 const Configuration& config);

/// One CLI invocation with captured streams.
struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli_captured(const std::vector<std::string>& args);

/// Copies tests/golden/<name> into `work` and runs `generate` on its
/// variant.vsp. `files` is the resulting out/ tree, `expected` the
/// hand-written expected/ tree.
struct GoldenRun {
  CliRun cli;
  std::map<std::string, std::string> files;
  std::map<std::string, std::string> expected;
};

GoldenRun run_golden(const std::string& name, const fs::path& work);

/// Names of the checked-in golden cases, sorted.
std::vector<std::string> golden_cases();

}  // namespace cgpl::testing
