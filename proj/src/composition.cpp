#include "cgpl/composition.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace cgpl {

CompositionFailure::CompositionFailure(CompositionError error)
    : std::runtime_error(error.code + ": " + error.detail), error_(std::move(error)) {}

ComponentPtr ComposedGenerator::find(std::string_view id) const {
  for (const auto& c : components) {
    if (c->id == id) return c;
  }
  return nullptr;
}

namespace {

template <typename T, typename Key>
void sort_unique(std::vector<T>& v, Key key) {
  std::sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void canonicalize(ComponentInterface& api) {
  std::sort(api.constraints.begin(), api.constraints.end());
  api.constraints.erase(std::unique(api.constraints.begin(), api.constraints.end()),
                        api.constraints.end());
  sort_unique(api.options, [](const OptionDecl& o) { return o.name; });
  sort_unique(api.variation_points, [](const VariationPoint& v) { return v.name; });
  sort_unique(api.forced, [](const ForcedOption& f) {
    return std::make_tuple(f.feature, f.option, to_string(f.value));
  });
}

ComponentInterface qualified_interface(const GeneratorComponent& c) {
  ComponentInterface api = c.interface;
  for (auto& o : api.options) o.name = c.id + "." + o.name;
  for (auto& v : api.variation_points) v.name = c.id + "." + v.name;
  for (auto& f : api.forced) f.option = c.id + "." + f.option;
  canonicalize(api);
  return api;
}

}  // namespace

ComposedGenerator as_composed(ComponentPtr component, std::shared_ptr<const FeatureModel> model) {
  ComposedGenerator g;
  g.merged_interface = qualified_interface(*component);
  g.components.push_back(std::move(component));
  g.feature_model = std::move(model);
  return g;
}

ComposedGenerator compose(const ComposedGenerator& a, const ComposedGenerator& b) {
  if (a.feature_model != b.feature_model && !(*a.feature_model == *b.feature_model)) {
    throw std::invalid_argument("operands belong to different feature models");
  }
  for (const auto& ca : a.components) {
    if (b.find(ca->id)) {
      throw CompositionFailure({std::string(kCmpDupId),
                                "component " + ca->id + " appears in both operands",
                                {ca->id}});
    }
  }

  ComposedGenerator out;
  out.feature_model = a.feature_model;
  out.components = a.components;
  out.components.insert(out.components.end(), b.components.begin(), b.components.end());

  const ComponentInterface& x = a.merged_interface;
  const ComponentInterface& y = b.merged_interface;
  ComponentInterface m = x;
  for (const auto& concern : y.concerns) {
    auto clash = std::find_if(m.concerns.begin(), m.concerns.end(), [&](const Concern& c) {
      return c.id == concern.id && c.description != concern.description;
    });
    if (clash != m.concerns.end()) {
      std::vector<std::string> involved;
      for (const auto* side : {&a, &b}) {
        for (const auto& c : side->components) {
          for (const auto& own : c->interface.concerns) {
            if (own.id == concern.id) involved.push_back(c->id);
          }
        }
      }
      throw CompositionFailure({std::string(kCmpConcernClash),
                                "concern " + concern.id + " is described as '" +
                                    clash->description + "' and '" + concern.description + "'",
                                involved});
    }
    m.concerns.insert(concern);
  }
  m.constraints.insert(m.constraints.end(), y.constraints.begin(), y.constraints.end());
  m.options.insert(m.options.end(), y.options.begin(), y.options.end());
  m.variation_points.insert(m.variation_points.end(), y.variation_points.begin(),
                            y.variation_points.end());
  m.forced.insert(m.forced.end(), y.forced.begin(), y.forced.end());
  m.produces.insert(y.produces.begin(), y.produces.end());
  m.consumes.insert(y.consumes.begin(), y.consumes.end());
  m.hooks_provided.insert(y.hooks_provided.begin(), y.hooks_provided.end());
  m.hooks_required.insert(y.hooks_required.begin(), y.hooks_required.end());
  canonicalize(m);
  out.merged_interface = std::move(m);
  return out;
}

ComposedGenerator compose_all(std::span<const ComponentPtr> components,
                              std::shared_ptr<const FeatureModel> model) {
  if (components.empty()) throw std::invalid_argument("nothing to compose");
  ComposedGenerator acc = as_composed(components.front(), model);
  for (std::size_t i = 1; i < components.size(); ++i) {
    acc = compose(acc, as_composed(components[i], model));
  }
  return acc;
}

OptionMap qualified_options(const ComposedGenerator& composed, const VariantSpec& spec) {
  OptionMap out;
  for (const auto& c : composed.components) {
    for (const auto& [name, value] : effective_configuration(*c, spec)) {
      out[c->id + "." + name] = value;
    }
  }
  return out;
}

bool hook_pattern_matches(std::string_view provided, std::string_view required) {
  if (provided == required) return true;
  // Iterative glob match with backtracking on the last '*'.
  std::size_t p = 0, r = 0, star = std::string_view::npos, mark = 0;
  while (r < required.size()) {
    if (p < provided.size() && provided[p] == '*') {
      star = p++;
      mark = r;
    } else if (p < provided.size() && provided[p] == required[r]) {
      ++p;
      ++r;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      r = ++mark;
    } else {
      return false;
    }
  }
  while (p < provided.size() && provided[p] == '*') ++p;
  return p == provided.size();
}

namespace {

std::function<bool(std::string_view)> truth_of(const Configuration& config,
                                               const OptionMap& options) {
  return [&config, &options](std::string_view atom) {
    if (atom.find('.') == std::string_view::npos) return config.has(atom);
    auto it = options.find(std::string(atom));
    if (it == options.end()) return false;
    const bool* b = std::get_if<bool>(&it->second);
    return b && *b;
  };
}

/// component id -> ids it feeds through some fact topic (self edges dropped).
std::map<std::string, std::set<std::string>> fact_edges(const std::vector<ComponentPtr>& cs) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& p : cs) {
    edges[p->id];
    for (const auto& c : cs) {
      if (p == c) continue;
      for (FactTopic t : p->interface.produces) {
        if (c->interface.consumes.count(t)) {
          edges[p->id].insert(c->id);
          break;
        }
      }
    }
  }
  return edges;
}

std::optional<std::vector<std::string>> find_cycle(
    const std::map<std::string, std::set<std::string>>& edges) {
  enum Color { White, Grey, Black };
  std::map<std::string, Color> color;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;
  std::function<bool(const std::string&)> visit = [&](const std::string& n) {
    color[n] = Grey;
    stack.push_back(n);
    for (const auto& m : edges.at(n)) {
      if (color[m] == Grey) {
        found.emplace(std::find(stack.begin(), stack.end(), m), stack.end());
        return true;
      }
      if (color[m] == White && visit(m)) return true;
    }
    stack.pop_back();
    color[n] = Black;
    return false;
  };
  for (const auto& [n, _] : edges) {
    if (color[n] == White && visit(n)) break;
  }
  if (found) std::sort(found->begin(), found->end());
  return found;
}

}  // namespace

ComposedGenerator compose_variant(const ComponentRegistry& registry, const VariantSpec& spec) {
  std::vector<ComponentPtr> components = resolve_components(spec.configuration, registry);
  return compose_all(components, registry.feature_model_ptr());
}

ValidationReport validate_composition(const ComposedGenerator& composed, const VariantSpec& spec) {
  ValidationReport report;
  const OptionMap options = qualified_options(composed, spec);
  auto truth = truth_of(spec.configuration, options);

  for (const auto& c : composed.components) {
    for (const auto& f : c->interface.constraints) {
      if (!f.evaluate(truth)) {
        report.add({std::string(kCmpConstraint), {c->id},
                    "constraint " + f.to_string() + " of " + c->id + " is violated", {}});
      }
    }
  }

  for (const auto& c : composed.components) {
    for (FactTopic t : c->interface.consumes) {
      bool produced = std::any_of(composed.components.begin(), composed.components.end(),
                                  [&](const ComponentPtr& p) {
                                    return p != c && p->interface.produces.count(t);
                                  });
      if (!produced) {
        report.add({std::string(kCmpNoProducer), {c->id},
                    c->id + " consumes " + std::string(to_string(t)) +
                        " but no component produces it",
                    {}});
      }
    }
  }

  if (auto cycle = find_cycle(fact_edges(composed.components))) {
    std::string names;
    for (const auto& n : *cycle) names += (names.empty() ? "" : ", ") + n;
    report.add({std::string(kCmpFactCycle), *cycle,
                "fact exchange between {" + names + "} is cyclic", {}});
  }

  if (spec.mode != BindingMode::GenerationTime) {
    for (const auto& c : composed.components) {
      for (const auto& required : c->interface.hooks_required) {
        bool provided = std::any_of(
            composed.merged_interface.hooks_provided.begin(),
            composed.merged_interface.hooks_provided.end(),
            [&](const std::string& p) { return hook_pattern_matches(p, required); });
        if (!provided) {
          report.add({std::string(kCmpNoProducer), {c->id},
                      c->id + " requires hook " + required + " but no component provides it",
                      {}});
        }
      }
    }
  }
  return report;
}

Schedule schedule(const ComposedGenerator& composed, const VariantSpec& spec) {
  const OptionMap options = qualified_options(composed, spec);
  auto truth = truth_of(spec.configuration, options);

  struct Item {
    const GeneratorComponent* component;
    const Behavior* behavior;
  };
  std::map<Phase, std::vector<Item>> by_phase;
  for (const auto& c : composed.components) {
    for (const auto& b : c->behaviors) {
      if (b.applicability.evaluate(truth)) by_phase[b.phase].push_back({c.get(), &b});
    }
  }

  Schedule out;
  for (auto& [phase, items] : by_phase) {
    bool topological = phase == Phase::Declare || phase == Phase::Emit;
    const std::size_t n = items.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    if (topological) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto* p = items[i].component;
          const auto* q = items[j].component;
          if (p == q) continue;
          bool feeds = std::any_of(p->interface.produces.begin(), p->interface.produces.end(),
                                   [&](FactTopic t) { return q->interface.consumes.count(t) > 0; });
          if (feeds) {
            succ[i].push_back(j);
            ++indegree[j];
          }
        }
      }
    }
    auto later = [&](std::size_t a, std::size_t b) {
      return std::tie(items[a].component->id, items[a].behavior->name) >
             std::tie(items[b].component->id, items[b].behavior->name);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) ready.push(i);
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
      std::size_t i = ready.top();
      ready.pop();
      ++emitted;
      out.push_back({items[i].component->id, items[i].behavior->name, phase});
      for (std::size_t j : succ[i]) {
        if (--indegree[j] == 0) ready.push(j);
      }
    }
    if (emitted != n) {
      std::set<std::string> stuck;
      for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] > 0) stuck.insert(items[i].component->id);
      }
      throw CompositionFailure({std::string(kCmpFactCycle),
                                "no producer-before-consumer order exists in phase " +
                                    std::string(to_string(phase)),
                                {stuck.begin(), stuck.end()}});
    }
  }
  return out;
}

}  // namespace cgpl
