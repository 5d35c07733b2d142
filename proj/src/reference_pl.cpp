#include "cgpl/reference_pl.hpp"

#include <algorithm>
#include <cctype>

#include "cgpl/class_diagram.hpp"
#include "cgpl/generation.hpp"

namespace cgpl {

namespace {

constexpr std::string_view kModelText = R"(// Class diagrams to an object-oriented target language.
featuremodel CD2Java {
  CD2Java! {
    Types! {
      Class!
      Enum?
      Interface?
      DefaultConstructor?
    }
    Builder?
    Factory?
  }
}
constraints {
  DefaultConstructor requires Class;
  Builder requires Class;
  Factory requires Class;
}
)";

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string decapitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

std::string provider_name(const std::string& type) { return type + "Provider"; }
std::string provider_field(const std::string& type) { return decapitalize(type) + "Provider"; }

Behavior behavior(std::string name, Phase phase, BehaviorFn run, std::string applicability = "") {
  return {std::move(name), phase,
          applicability.empty() ? Formula::constant(true) : Formula::parse(applicability),
          std::move(run)};
}

OptionDecl flag(std::string name, bool default_value) {
  return {std::move(name), OptionType::Flag, {}, default_value};
}

void put(ArtifactContainer& c, std::string text, std::set<FeatureId> features,
         const std::string& component) {
  c.append(text, std::move(features), component);
}

// ---------------------------------------------------------------------------
// Front ends

GeneratorComponent core_front_end() {
  GeneratorComponent c;
  c.id = "CoreFrontEnd";
  c.version = "1.0";
  c.kind = ComponentKind::FrontEnd;
  c.interface.concerns = {{"core-conditions", "well-formedness of class diagrams"}};
  c.behaviors.push_back(behavior("core_conditions", Phase::Restrict, [](BehaviorContext& ctx) {
    for (auto& cc : core_context_conditions()) ctx.add_condition(std::move(cc));
  }));
  return c;
}

void guard_tags(const ClassDiagram& d, std::string_view tag, const std::string& code,
                const std::string& why, ValidationReport& report) {
  for (const ClassDecl* c : d.classes()) {
    if (c->has_tag(tag)) {
      report.add({code, {c->name},
                  "class " + c->name + " is tagged <<" + std::string(tag) + ">> but " + why,
                  c->loc});
    }
  }
}

/// Conditions that keep the input inside what the selected variant can
/// generate. A tag can suppress generation, never enable a feature.
void feature_guard(BehaviorContext& ctx) {
  const std::string origin = ctx.component().id;
  if (!ctx.selected("Enum")) {
    ctx.add_condition({std::string(kFgEnum), "no enum declarations without Enum", origin,
                       [](const ClassDiagram& d, const SymbolTable&, ValidationReport& r) {
                         for (const auto& t : d.types) {
                           if (const auto* e = std::get_if<EnumDecl>(&t)) {
                             r.add({std::string(kFgEnum), {e->name},
                                    "enum " + e->name + " declared but feature Enum is not selected",
                                    e->loc});
                           }
                         }
                       }});
  }
  if (!ctx.selected("Interface")) {
    ctx.add_condition(
        {std::string(kFgInterface), "no interfaces or implements clauses without Interface",
         origin, [](const ClassDiagram& d, const SymbolTable&, ValidationReport& r) {
           for (const auto& t : d.types) {
             if (const auto* i = std::get_if<InterfaceDecl>(&t)) {
               r.add({std::string(kFgInterface), {i->name},
                      "interface " + i->name + " declared but feature Interface is not selected",
                      i->loc});
             } else if (const auto* c = std::get_if<ClassDecl>(&t); c && !c->interfaces.empty()) {
               r.add({std::string(kFgInterface), {c->name},
                      "class " + c->name +
                          " has an implements clause but feature Interface is not selected",
                      c->loc});
             }
           }
         }});
  }
  if (!ctx.selected("Builder")) {
    ctx.add_condition({std::string(kFgNoBuilder), "<<nobuilder>> needs Builder", origin,
                       [](const ClassDiagram& d, const SymbolTable&, ValidationReport& r) {
                         guard_tags(d, kTagNoBuilder, std::string(kFgNoBuilder),
                                    "feature Builder is not selected", r);
                       }});
  }
  if (ctx.mode() != BindingMode::Hybrid) {
    ctx.add_condition({std::string(kFgExternal), "<<external>> needs hybrid binding", origin,
                       [](const ClassDiagram& d, const SymbolTable&, ValidationReport& r) {
                         guard_tags(d, kTagExternal, std::string(kFgExternal),
                                    "the binding mode is not hybrid", r);
                       }});
  }
  ctx.add_condition({std::string(kFgTag), "only known tags", origin,
                     [](const ClassDiagram& d, const SymbolTable&, ValidationReport& r) {
                       for (const ClassDecl* c : d.classes()) {
                         for (const auto& tag : c->tags) {
                           if (tag != kTagNoBuilder && tag != kTagExternal) {
                             r.add({std::string(kFgTag), {c->name, tag},
                                    "class " + c->name + " has unknown tag <<" + tag + ">>",
                                    c->loc});
                           }
                         }
                       }
                     }});
}

GeneratorComponent feature_guard_component() {
  GeneratorComponent c;
  c.id = "FeatureGuard";
  c.version = "1.0";
  c.kind = ComponentKind::FrontEnd;
  c.interface.concerns = {{"feature-guards", "input restrictions implied by the selection"}};
  c.behaviors.push_back(behavior("feature_guard", Phase::Restrict, feature_guard));
  return c;
}

// ---------------------------------------------------------------------------
// Types

std::string class_header(const ClassDecl& c) {
  std::string h = "class " + c.name;
  if (c.superclass) h += " extends " + *c.superclass;
  if (!c.interfaces.empty()) {
    h += " implements ";
    for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
      h += (i ? ", " : "") + c.interfaces[i];
    }
  }
  return h + " {\n";
}

void emit_class(ArtifactContainer& out, const std::string& package, const ClassDecl& c,
                bool constructor, const std::string& extra, const std::string& id) {
  put(out, "package " + package + ";\n", {"Class"}, id);
  std::set<FeatureId> header{"Class"};
  if (!c.interfaces.empty()) header.insert("Interface");
  put(out, class_header(c), header, id);
  std::string fields;
  for (const auto& a : c.attributes) fields += "  " + a.type_name + " " + a.name + ";\n";
  if (!fields.empty()) put(out, fields, {"Class"}, id);
  if (constructor) put(out, "  " + c.name + "() { }\n", {"DefaultConstructor"}, id);
  if (!extra.empty()) put(out, extra.back() == '\n' ? extra : extra + "\n", {"Types"}, id);
  put(out, "}\n", {"Class"}, id);
}

bool providers_active(const BehaviorContext& ctx) {
  return ctx.mode() != BindingMode::GenerationTime && ctx.flag("provide_hooks");
}

void declare_types(BehaviorContext& ctx) {
  for (const auto& t : ctx.diagram().types) {
    std::string kind;
    if (std::holds_alternative<ClassDecl>(t)) {
      kind = "class";
    } else if (std::holds_alternative<EnumDecl>(t)) {
      if (!ctx.flag("generate_enums")) continue;
      kind = "enum";
    } else {
      if (!ctx.flag("generate_interfaces")) continue;
      kind = "interface";
    }
    const std::string& name = decl_name(t);
    const std::string artifact = name + ".oo";
    ctx.claim(artifact);
    ctx.publish(FactTopic::TypeGenerated, name, {{"kind", kind}, {"artifact", artifact}});
    if (kind == "class" && ctx.flag("default_constructor")) {
      ctx.publish(FactTopic::ConstructorGenerated, name, {{"signature", name + "()"}});
    }
  }
}

void declare_providers(BehaviorContext& ctx) {
  if (!providers_active(ctx)) return;
  for (const ClassDecl* c : ctx.diagram().classes()) {
    const std::string hook = provider_name(c->name);
    ctx.claim(hook + ".oo");
    ctx.publish(FactTopic::HookProvided, hook, {{"artifact", hook + ".oo"}, {"method", "provide"}});
  }
}

void emit_classes(BehaviorContext& ctx) {
  const std::string package = ctx.diagram().name;
  const bool constructor = ctx.flag("default_constructor");
  const std::string extra = ctx.variation_point("extra_members");
  const std::string id = ctx.component().id;
  for (const ClassDecl* c : ctx.diagram().classes()) {
    ctx.emit_artifact({c->name + ".oo", print_type_decl(*c), {}},
                      [&](ArtifactContainer& out, const std::vector<Fact>&) {
                        emit_class(out, package, *c, constructor, extra, id);
                      });
  }
}

void emit_enums(BehaviorContext& ctx) {
  const std::string package = ctx.diagram().name;
  const std::string id = ctx.component().id;
  for (const auto& t : ctx.diagram().types) {
    const auto* e = std::get_if<EnumDecl>(&t);
    if (!e) continue;
    ctx.emit_artifact({e->name + ".oo", print_type_decl(t), {}},
                      [&](ArtifactContainer& out, const std::vector<Fact>&) {
                        std::string text = "package " + package + ";\nenum " + e->name + " {\n";
                        for (std::size_t i = 0; i < e->constants.size(); ++i) {
                          text += "  " + e->constants[i] +
                                  (i + 1 < e->constants.size() ? ",\n" : "\n");
                        }
                        put(out, text + "}\n", {"Enum"}, id);
                      });
  }
}

void emit_interfaces(BehaviorContext& ctx) {
  const std::string package = ctx.diagram().name;
  const std::string id = ctx.component().id;
  for (const auto& t : ctx.diagram().types) {
    const auto* i = std::get_if<InterfaceDecl>(&t);
    if (!i) continue;
    ctx.emit_artifact({i->name + ".oo", print_type_decl(t), {}},
                      [&](ArtifactContainer& out, const std::vector<Fact>&) {
                        std::string text =
                            "package " + package + ";\ninterface " + i->name + " {\n";
                        for (const auto& op : i->operations) {
                          text += "  " + op.return_type + " " + op.name + "();\n";
                        }
                        put(out, text + "}\n", {"Interface"}, id);
                      });
  }
}

void emit_providers(BehaviorContext& ctx) {
  if (!providers_active(ctx)) return;
  const std::string package = ctx.diagram().name;
  const std::string id = ctx.component().id;
  for (const ClassDecl* c : ctx.diagram().classes()) {
    const std::string hook = provider_name(c->name);
    ctx.emit_artifact({hook + ".oo", "provider " + c->name, {}},
                      [&](ArtifactContainer& out, const std::vector<Fact>&) {
                        put(out,
                            "package " + package + ";\ninterface " + hook + " {\n  " + c->name +
                                " provide();\n}\n",
                            {"Class"}, id);
                      });
  }
}

GeneratorComponent types_component() {
  GeneratorComponent c;
  c.id = "Types";
  c.version = "1.0";
  c.kind = ComponentKind::BackEnd;
  c.realizes = {"Types", "Class", "Enum", "Interface", "DefaultConstructor"};
  auto& api = c.interface;
  api.concerns = {{"classes", "generate classes"},
                  {"interfaces", "generate interfaces"},
                  {"enumerations", "generate enumerations"},
                  {"default-constructors", "generate default constructors"}};
  // Options may only be switched on together with their feature.
  api.constraints = {Formula::parse("Class"),
                     Formula::parse("Types.default_constructor implies DefaultConstructor"),
                     Formula::parse("Types.generate_enums implies Enum"),
                     Formula::parse("Types.generate_interfaces implies Interface")};
  api.options = {flag("default_constructor", false), flag("generate_enums", false),
                 flag("generate_interfaces", false), flag("provide_hooks", true)};
  api.variation_points = {{"extra_members", VariationPointKind::TextFragment, ""}};
  api.forced = {{"DefaultConstructor", "default_constructor", true},
                {"Enum", "generate_enums", true},
                {"Interface", "generate_interfaces", true}};
  api.produces = {FactTopic::TypeGenerated, FactTopic::ConstructorGenerated,
                  FactTopic::HookProvided, FactTopic::ArtifactClaimed};
  api.hooks_provided = {"*Provider"};
  c.behaviors = {
      behavior("declare_types", Phase::Declare, declare_types),
      behavior("declare_providers", Phase::Declare, declare_providers, "Types.provide_hooks"),
      behavior("emit_classes", Phase::Emit, emit_classes),
      behavior("emit_enums", Phase::Emit, emit_enums, "Types.generate_enums"),
      behavior("emit_interfaces", Phase::Emit, emit_interfaces, "Types.generate_interfaces"),
      behavior("emit_providers", Phase::Emit, emit_providers, "Types.provide_hooks"),
  };
  return c;
}

// ---------------------------------------------------------------------------
// Builder

std::vector<const ClassDecl*> buildable(const ClassDiagram& d) {
  std::vector<const ClassDecl*> out;
  for (const ClassDecl* c : d.classes()) {
    if (!c->has_tag(kTagNoBuilder)) out.push_back(c);
  }
  return out;
}

std::string builder_method(const std::string& pattern, const Attribute& a) {
  return apply_name_pattern(pattern, capitalize(a.name));
}

void declare_builders(BehaviorContext& ctx) {
  const std::string& pattern = ctx.variation_point("with_method_pattern");
  for (const ClassDecl* c : buildable(ctx.diagram())) {
    if (ctx.facts(FactTopic::ConstructorGenerated, c->name).empty()) {
      ctx.report({std::string(kGenMissingFact), {ctx.component().id, c->name},
                  "builder for " + c->name + " needs a constructor.generated fact", c->loc});
      continue;
    }
    const std::string name = c->name + "Builder";
    ctx.claim(name + ".oo");
    std::string methods;
    for (const auto& a : c->attributes) methods += builder_method(pattern, a) + ",";
    ctx.publish(FactTopic::MethodGenerated, name, {{"methods", methods + "build"}});
  }
}

void emit_builders(BehaviorContext& ctx) {
  const std::string& pattern = ctx.variation_point("with_method_pattern");
  const std::string id = ctx.component().id;
  for (const ClassDecl* c : buildable(ctx.diagram())) {
    const std::string name = c->name + "Builder";
    ArtifactRequest request{name + ".oo",
                            print_type_decl(*c),
                            {{FactTopic::TypeGenerated, c->name},
                             {FactTopic::ConstructorGenerated, c->name}}};
    ctx.emit_artifact(request, [&](ArtifactContainer& out, const std::vector<Fact>&) {
      std::string text = "package " + ctx.diagram().name + ";\nclass " + name + " {\n";
      text += "  " + c->name + " result;\n";
      text += "  " + name + "() { result = new " + c->name + "(); }\n";
      for (const auto& a : c->attributes) {
        text += "  " + name + " " + builder_method(pattern, a) + "(" + a.type_name +
                " v) { result." + a.name + " = v; return this; }\n";
      }
      text += "  " + c->name + " build() { return result; }\n}\n";
      put(out, text, {"Builder"}, id);
    });
  }
}

GeneratorComponent builder_component() {
  GeneratorComponent c;
  c.id = "Builder";
  c.version = "1.0";
  c.kind = ComponentKind::BackEnd;
  c.realizes = {"Builder"};
  auto& api = c.interface;
  api.concerns = {{"builders", "generate a builder per class"}};
  api.constraints = {Formula::parse("Builder implies DefaultConstructor")};
  api.variation_points = {{"with_method_pattern", VariationPointKind::NamePattern, "with%s"}};
  api.produces = {FactTopic::ArtifactClaimed, FactTopic::MethodGenerated};
  api.consumes = {FactTopic::TypeGenerated, FactTopic::ConstructorGenerated};
  c.behaviors = {behavior("declare_builders", Phase::Declare, declare_builders),
                 behavior("emit_builders", Phase::Emit, emit_builders)};
  return c;
}

// ---------------------------------------------------------------------------
// Factory

struct Product {
  std::string name;
  bool delegated = false;
};

/// Classes known from type.generated facts, alphabetical. In run_time
/// mode every product comes from a provider; in hybrid mode only the
/// <<external>> ones.
std::vector<Product> products(BehaviorContext& ctx) {
  std::vector<Product> out;
  for (const auto& f : ctx.facts(FactTopic::TypeGenerated)) {
    auto kind = f.payload.find("kind");
    if (kind == f.payload.end() || kind->second != "class") continue;
    const ClassDecl* decl = ctx.diagram().find_class(f.subject);
    bool delegated = ctx.mode() == BindingMode::RunTime ||
                     (ctx.mode() == BindingMode::Hybrid && decl && decl->has_tag(kTagExternal));
    out.push_back({f.subject, delegated});
  }
  std::sort(out.begin(), out.end(),
            [](const Product& a, const Product& b) { return a.name < b.name; });
  return out;
}

std::string factory_name(const BehaviorContext& ctx) { return ctx.diagram().name + "Factory"; }

void declare_factory(BehaviorContext& ctx) {
  const std::string name = factory_name(ctx);
  ctx.claim(name + ".oo");
  const std::string& prefix = ctx.variation_point("factory_method_prefix");
  std::string methods;
  for (const auto& p : products(ctx)) {
    if (p.delegated) {
      ctx.publish(FactTopic::HookRequired, provider_name(p.name), {{"artifact", name + ".oo"}});
    }
    methods += (methods.empty() ? "" : ",") + apply_name_pattern(prefix, p.name);
  }
  ctx.publish(FactTopic::MethodGenerated, name, {{"methods", methods}});
}

void emit_factory(BehaviorContext& ctx) {
  const std::string name = factory_name(ctx);
  const std::string& prefix = ctx.variation_point("factory_method_prefix");
  const std::string id = ctx.component().id;
  const std::vector<Product> list = products(ctx);
  std::string input;
  for (const auto& p : list) input += p.name + (p.delegated ? " provided\n" : " direct\n");

  ctx.emit_artifact({name + ".oo", input, {{FactTopic::TypeGenerated, std::nullopt}}},
                    [&](ArtifactContainer& out, const std::vector<Fact>&) {
                      std::string text =
                          "package " + ctx.diagram().name + ";\nclass " + name + " {\n";
                      for (const auto& p : list) {
                        if (p.delegated) {
                          text += "  " + provider_name(p.name) + " " + provider_field(p.name) +
                                  ";\n";
                        }
                      }
                      for (const auto& p : list) {
                        std::string body = p.delegated
                                               ? provider_field(p.name) + ".provide()"
                                               : "new " + p.name + "()";
                        text += "  " + p.name + " " + apply_name_pattern(prefix, p.name) +
                                "() { return " + body + "; }\n";
                      }
                      put(out, text + "}\n", {"Factory"}, id);
                    });
}

GeneratorComponent factory_component() {
  GeneratorComponent c;
  c.id = "Factory";
  c.version = "1.0";
  c.kind = ComponentKind::BackEnd;
  c.realizes = {"Factory"};
  auto& api = c.interface;
  api.concerns = {{"factories", "generate one factory per diagram"}};
  api.constraints = {Formula::parse("Factory implies DefaultConstructor")};
  api.variation_points = {
      {"factory_method_prefix", VariationPointKind::NamePattern, "create%s"}};
  api.produces = {FactTopic::ArtifactClaimed, FactTopic::HookRequired,
                  FactTopic::MethodGenerated};
  api.consumes = {FactTopic::TypeGenerated};
  api.hooks_required = {"*Provider"};
  c.behaviors = {behavior("declare_factory", Phase::Declare, declare_factory),
                 behavior("emit_factory", Phase::Emit, emit_factory)};
  return c;
}

}  // namespace

std::string_view reference_feature_model_text() { return kModelText; }

std::shared_ptr<const FeatureModel> reference_feature_model() {
  static const auto model =
      std::make_shared<const FeatureModel>(parse_feature_model(kModelText));
  return model;
}

ComponentRegistry build_reference_registry(std::shared_ptr<const FeatureModel> model) {
  ComponentRegistry registry(std::move(model));
  registry.add(core_front_end());
  registry.add(feature_guard_component());
  registry.add(types_component());
  registry.add(builder_component());
  registry.add(factory_component());
  return registry;
}

ComponentRegistry build_reference_registry() {
  return build_reference_registry(reference_feature_model());
}

}  // namespace cgpl
