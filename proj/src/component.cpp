#include "cgpl/component.hpp"

#include <algorithm>

#include "cgpl/lexer.hpp"

namespace cgpl {

std::string_view to_string(ComponentKind kind) {
  return kind == ComponentKind::FrontEnd ? "front_end" : "back_end";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Restrict: return "restrict";
    case Phase::Transform: return "transform";
    case Phase::Declare: return "declare";
    case Phase::Emit: return "emit";
  }
  return "?";
}

std::string_view to_string(BindingMode mode) {
  switch (mode) {
    case BindingMode::GenerationTime: return "generation_time";
    case BindingMode::RunTime: return "run_time";
    case BindingMode::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<BindingMode> parse_binding_mode(std::string_view text) {
  for (auto m : {BindingMode::GenerationTime, BindingMode::RunTime, BindingMode::Hybrid}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

namespace {
constexpr FactTopic kAllTopics[] = {
    FactTopic::TypeGenerated,   FactTopic::ConstructorGenerated, FactTopic::MethodGenerated,
    FactTopic::ArtifactClaimed, FactTopic::HookProvided,         FactTopic::HookRequired,
};
}  // namespace

std::string_view to_string(FactTopic topic) {
  switch (topic) {
    case FactTopic::TypeGenerated: return "type.generated";
    case FactTopic::ConstructorGenerated: return "constructor.generated";
    case FactTopic::MethodGenerated: return "method.generated";
    case FactTopic::ArtifactClaimed: return "artifact.claimed";
    case FactTopic::HookProvided: return "hook.provided";
    case FactTopic::HookRequired: return "hook.required";
  }
  return "?";
}

FactTopic parse_fact_topic(std::string_view text) {
  for (auto t : kAllTopics) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("fact topic '" + std::string(text) +
                              "' is not part of the ontology");
}

std::string to_string(const OptionValue& value) {
  if (const bool* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  return std::get<std::string>(value);
}

const OptionDecl* ComponentInterface::find_option(std::string_view name) const {
  for (const auto& o : options) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

const VariationPoint* ComponentInterface::find_variation_point(std::string_view name) const {
  for (const auto& v : variation_points) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool is_name_pattern(std::string_view pattern) {
  auto first = pattern.find("%s");
  return first != std::string_view::npos && pattern.find("%s", first + 2) == std::string_view::npos;
}

std::string apply_name_pattern(std::string_view pattern, std::string_view name) {
  std::string out(pattern);
  auto at = out.find("%s");
  if (at != std::string::npos) out.replace(at, 2, name);
  return out;
}

namespace {

bool value_fits(const OptionDecl& decl, const OptionValue& value) {
  switch (decl.type) {
    case OptionType::Flag:
      return std::holds_alternative<bool>(value);
    case OptionType::Choice: {
      const auto* s = std::get_if<std::string>(&value);
      return s && std::find(decl.choices.begin(), decl.choices.end(), *s) != decl.choices.end();
    }
    case OptionType::Text:
      return std::holds_alternative<std::string>(value);
  }
  return false;
}

/// Interprets the textual value of a binding according to the option type.
std::optional<OptionValue> coerce(const OptionDecl& decl, const std::string& raw) {
  OptionValue v;
  if (decl.type == OptionType::Flag) {
    if (raw == "true") {
      v = true;
    } else if (raw == "false") {
      v = false;
    } else {
      return std::nullopt;
    }
  } else {
    v = raw;
  }
  if (!value_fits(decl, v)) return std::nullopt;
  return v;
}

std::string describe_type(const OptionDecl& decl) {
  switch (decl.type) {
    case OptionType::Flag: return "flag";
    case OptionType::Text: return "text";
    case OptionType::Choice: {
      std::string s = "choice(";
      for (std::size_t i = 0; i < decl.choices.size(); ++i) {
        if (i) s += ",";
        s += decl.choices[i];
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

std::vector<std::string> check_component(const GeneratorComponent& c, const FeatureModel& model) {
  std::vector<std::string> problems;
  auto problem = [&](std::string p) { problems.push_back(std::move(p)); };

  if (!is_identifier(c.id)) problem("component id '" + c.id + "' is not an identifier");
  if (c.version.empty()) problem("missing version");
  for (const auto& f : c.realizes) {
    if (!model.contains(f)) problem("realizes unknown feature " + f);
  }

  const ComponentInterface& api = c.interface;
  if (c.kind == ComponentKind::FrontEnd && (!api.produces.empty() || !api.consumes.empty())) {
    problem("front_end component exchanges facts");
  }

  std::set<std::string> names;
  for (const auto& o : api.options) {
    if (!is_identifier(o.name)) problem("option name '" + o.name + "' is not an identifier");
    if (!names.insert(o.name).second) problem("duplicate option/variation point " + o.name);
    if (o.type == OptionType::Choice && o.choices.empty()) {
      problem("choice option " + o.name + " has no choices");
    }
    if (!value_fits(o, o.default_value)) {
      problem("default of option " + o.name + " is not a " + describe_type(o));
    }
  }
  for (const auto& vp : api.variation_points) {
    if (!is_identifier(vp.name)) problem("variation point '" + vp.name + "' is not an identifier");
    if (!names.insert(vp.name).second) problem("duplicate option/variation point " + vp.name);
    if (vp.kind == VariationPointKind::NamePattern && !is_name_pattern(vp.default_text)) {
      problem("default of name pattern " + vp.name + " must contain %s exactly once");
    }
  }
  for (const auto& f : api.forced) {
    if (!model.contains(f.feature)) problem("forced option keyed on unknown feature " + f.feature);
    const OptionDecl* o = api.find_option(f.option);
    if (!o) {
      problem("forced value for undeclared option " + f.option);
    } else if (!value_fits(*o, f.value)) {
      problem("forced value of " + f.option + " is not a " + describe_type(*o));
    }
  }
  for (const auto& h : api.hooks_provided) {
    if (h.empty()) problem("empty provided hook pattern");
  }
  for (const auto& h : api.hooks_required) {
    if (h.empty()) problem("empty required hook pattern");
  }

  auto check_closure = [&](const Formula& f, const std::string& where) {
    for (const auto& atom : f.atoms()) {
      auto dot = atom.find('.');
      if (dot == std::string::npos) {
        if (!model.contains(atom)) problem(where + " references unknown feature " + atom);
        continue;
      }
      std::string owner = atom.substr(0, dot);
      std::string option = atom.substr(dot + 1);
      const OptionDecl* o = api.find_option(option);
      if (owner != c.id || !o) {
        problem(where + " references undeclared option " + atom);
      } else if (o->type != OptionType::Flag) {
        problem(where + " references non-flag option " + atom);
      }
    }
  };
  for (const auto& f : api.constraints) check_closure(f, "constraint " + f.to_string());

  std::set<std::string> behavior_names;
  for (const auto& b : c.behaviors) {
    if (!behavior_names.insert(b.name).second) problem("duplicate behavior " + b.name);
    if (!b.run) problem("behavior " + b.name + " has no implementation");
    bool front_phase = b.phase == Phase::Restrict;
    if (c.kind == ComponentKind::FrontEnd && !front_phase) {
      problem("front_end behavior " + b.name + " in phase " + std::string(to_string(b.phase)));
    }
    if (c.kind == ComponentKind::BackEnd && front_phase) {
      problem("back_end behavior " + b.name + " in phase restrict");
    }
    check_closure(b.applicability, "applicability of " + b.name);
  }
  return problems;
}

RegistrationError::RegistrationError(std::string component, std::vector<std::string> problems)
    : std::invalid_argument([&] {
        std::string msg = "cannot register component " + component + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

ComponentRegistry::ComponentRegistry(std::shared_ptr<const FeatureModel> model)
    : model_(std::move(model)) {}

void ComponentRegistry::add(GeneratorComponent component) {
  auto problems = check_component(component, *model_);
  if (components_.count(component.id)) problems.push_back("id already registered");
  if (!problems.empty()) throw RegistrationError(component.id, std::move(problems));
  std::string id = component.id;
  components_.emplace(std::move(id), std::make_shared<const GeneratorComponent>(std::move(component)));
}

ComponentPtr ComponentRegistry::find(std::string_view id) const {
  auto it = components_.find(id);
  return it == components_.end() ? nullptr : it->second;
}

ValidationReport check_bindings(const VariantSpec& spec, const ComponentRegistry& registry) {
  ValidationReport report;
  auto bad = [&](const std::string& component, std::string message) {
    report.add({"VSP-BINDING", {component}, std::move(message), {}});
  };
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& b : spec.option_bindings) {
    ComponentPtr c = registry.find(b.component);
    if (!c) {
      bad(b.component, "option binding for unknown component " + b.component);
      continue;
    }
    const OptionDecl* o = c->interface.find_option(b.option);
    if (!o) {
      bad(b.component, b.component + " declares no option " + b.option);
    } else if (!coerce(*o, b.value)) {
      bad(b.component, "value '" + b.value + "' for " + b.component + "." + b.option +
                           " is not a " + describe_type(*o));
    }
    if (!seen.insert({b.component, b.option}).second) {
      bad(b.component, b.component + "." + b.option + " bound twice");
    }
  }
  for (const auto& b : spec.vp_bindings) {
    ComponentPtr c = registry.find(b.component);
    if (!c) {
      bad(b.component, "variation point binding for unknown component " + b.component);
      continue;
    }
    const VariationPoint* vp = c->interface.find_variation_point(b.point);
    if (!vp) {
      bad(b.component, b.component + " declares no variation point " + b.point);
    } else if (vp->kind == VariationPointKind::NamePattern && !is_name_pattern(b.text)) {
      bad(b.component, "binding of name pattern " + b.component + "." + b.point +
                           " must contain %s exactly once");
    }
    if (!seen.insert({b.component, b.point}).second) {
      bad(b.component, b.component + "." + b.point + " bound twice");
    }
  }
  return report;
}

std::vector<ComponentPtr> resolve_components(const Configuration& config,
                                             const ComponentRegistry& registry) {
  const FeatureModel& model = registry.feature_model();
  std::vector<ComponentPtr> out;
  for (const auto& id : config.selected) {
    if (id == model.root) continue;
    std::vector<std::string> realizers;
    for (const auto& [cid, c] : registry.components()) {
      if (c->realizes.count(id)) realizers.push_back(cid);
    }
    if (realizers.empty()) {
      throw ConfigError("RES-UNREALIZED", "selected feature " + id + " is realized by no component");
    }
    if (realizers.size() > 1) {
      throw ConfigError("RES-AMBIGUOUS", "feature " + id + " is realized by both " +
                                             realizers[0] + " and " + realizers[1]);
    }
  }
  for (const auto& [cid, c] : registry.components()) {
    bool always_on = c->realizes.empty();
    bool selected = std::any_of(c->realizes.begin(), c->realizes.end(),
                                [&](const FeatureId& f) { return config.has(f); });
    if (always_on || selected) out.push_back(c);
  }
  return out;  // map order == id order
}

OptionMap effective_configuration(const GeneratorComponent& component, const VariantSpec& spec) {
  const ComponentInterface& api = component.interface;
  for (const auto& b : spec.option_bindings) {
    if (b.component == component.id && !api.find_option(b.option)) {
      throw ConfigError("OPT-UNKNOWN", component.id + " declares no option " + b.option);
    }
  }
  OptionMap out;
  for (const auto& decl : api.options) {
    std::optional<OptionValue> forced;
    std::string forced_by;
    for (const auto& f : api.forced) {
      if (f.option == decl.name && spec.configuration.has(f.feature)) {
        forced = f.value;
        forced_by = f.feature;
      }
    }
    std::optional<OptionValue> bound;
    for (const auto& b : spec.option_bindings) {
      if (b.component != component.id || b.option != decl.name) continue;
      bound = coerce(decl, b.value);
      if (!bound) {
        throw ConfigError("OPT-TYPE", "value '" + b.value + "' for " + component.id + "." +
                                          decl.name + " is not a " + describe_type(decl));
      }
    }
    if (forced && bound && *forced != *bound) {
      throw ConfigError("OPT-CONTRADICTION",
                        "binding " + component.id + "." + decl.name + " = " + to_string(*bound) +
                            " contradicts selected feature " + forced_by + ", which forces " +
                            to_string(*forced));
    }
    out[decl.name] = forced ? *forced : bound ? *bound : decl.default_value;
  }
  return out;
}

VariationPointMap effective_variation_points(const GeneratorComponent& component,
                                             const VariantSpec& spec) {
  VariationPointMap out;
  for (const auto& vp : component.interface.variation_points) out[vp.name] = vp.default_text;
  for (const auto& b : spec.vp_bindings) {
    if (b.component != component.id) continue;
    const VariationPoint* vp = component.interface.find_variation_point(b.point);
    if (!vp) {
      throw ConfigError("VP-UNKNOWN", component.id + " declares no variation point " + b.point);
    }
    if (vp->kind == VariationPointKind::NamePattern && !is_name_pattern(b.text)) {
      throw ConfigError("VP-PATTERN", "binding of " + component.id + "." + b.point +
                                          " must contain %s exactly once");
    }
    out[b.point] = b.text;
  }
  return out;
}

}  // namespace cgpl
