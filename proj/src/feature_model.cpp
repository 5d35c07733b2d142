#include "cgpl/feature_model.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "cgpl/lexer.hpp"

namespace cgpl {

const Feature& FeatureModel::feature(std::string_view id) const {
  auto it = features.find(std::string(id));
  if (it == features.end()) {
    throw std::out_of_range("unknown feature '" + std::string(id) + "'");
  }
  return it->second;
}

std::vector<FeatureId> FeatureModel::preorder() const {
  std::vector<FeatureId> out;
  if (!contains(root)) return out;
  std::function<void(const FeatureId&)> walk = [&](const FeatureId& id) {
    out.push_back(id);
    for (const auto& child : feature(id).children) walk(child);
  };
  walk(root);
  return out;
}

Configuration make_configuration(std::initializer_list<std::string_view> ids) {
  Configuration c;
  for (auto id : ids) c.selected.emplace(id);
  return c;
}

Configuration parse_configuration_list(std::string_view list) {
  Configuration c;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) c.selected.emplace(item);
    start = comma + 1;
  }
  return c;
}

std::string join_configuration(const Configuration& config) {
  std::string out;
  for (const auto& id : config.selected) {
    if (!out.empty()) out += ",";
    out += id;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FML reader

namespace {

class FmlParser {
 public:
  explicit FmlParser(std::string_view source) : lex_(source) {}

  FeatureModel parse() {
    lex_.expect("featuremodel");
    model_.name = lex_.expect_ident("model name").text;
    lex_.expect("{");
    model_.root = parse_node(std::nullopt);
    lex_.expect("}");
    if (lex_.accept("constraints")) {
      lex_.expect("{");
      while (!lex_.peek().is("}")) parse_constraint();
      lex_.expect("}");
    }
    const Token& end = lex_.peek();
    if (end.kind != TokenKind::End) {
      lex_.fail(end, "expected end of input but found " + describe(end));
    }
    return std::move(model_);
  }

 private:
  struct PendingGroup {
    GroupKind kind;
    std::vector<Token> members;
    Token keyword;
  };

  FeatureId parse_node(const std::optional<FeatureId>& parent) {
    Token name = lex_.expect_ident("feature name");
    Feature f;
    f.id = name.text;
    f.name = name.text;
    f.parent = parent;
    const Token& marker = lex_.peek();
    if (marker.is("!")) {
      f.variability = Variability::Mandatory;
    } else if (marker.is("?")) {
      f.variability = Variability::Optional;
    } else {
      lex_.fail(marker, "expected '!' or '?' after feature '" + f.id +
                            "' but found " + describe(marker));
    }
    lex_.next();
    if (!model_.features.emplace(f.id, f).second) {
      lex_.fail(name, "duplicate feature id '" + f.id + "'");
    }

    std::vector<FeatureId> children;
    std::optional<PendingGroup> group;
    if (lex_.accept("{")) {
      while (!lex_.peek().is("}")) {
        if (lex_.peek().kind == TokenKind::End) {
          lex_.fail(lex_.peek(), "unterminated block of feature '" + f.id + "'");
        }
        Token head = lex_.peek();
        if (head.is("xor") || head.is("or")) {
          // "xor {" opens a group; "xor !" would be a feature named xor.
          Lexer probe = lex_;
          probe.next();
          if (probe.peek().is("{")) {
            lex_.next();
            if (group) lex_.fail(head, "feature '" + f.id + "' already has a group");
            group = parse_group(head);
            continue;
          }
        }
        children.push_back(parse_node(f.id));
      }
      lex_.expect("}");
    }

    Feature& stored = model_.features.at(f.id);
    stored.children = children;
    if (group) {
      FeatureGroup g;
      g.kind = group->kind;
      for (const Token& m : group->members) {
        if (std::find(children.begin(), children.end(), m.text) == children.end()) {
          lex_.fail(m, "group member '" + m.text + "' is not a child of '" + f.id + "'");
        }
        if (std::find(g.members.begin(), g.members.end(), m.text) != g.members.end()) {
          lex_.fail(m, "group member '" + m.text + "' listed twice");
        }
        g.members.push_back(m.text);
      }
      stored.group = std::move(g);
    }
    return f.id;
  }

  PendingGroup parse_group(const Token& keyword) {
    PendingGroup g{keyword.is("xor") ? GroupKind::Xor : GroupKind::Or, {}, keyword};
    lex_.expect("{");
    g.members.push_back(lex_.expect_ident("group member"));
    while (lex_.accept(",")) g.members.push_back(lex_.expect_ident("group member"));
    lex_.expect("}");
    return g;
  }

  void parse_constraint() {
    Token lhs = lex_.expect_ident("constraint feature");
    Token op = lex_.expect_ident("'requires' or 'excludes'");
    CrossTreeConstraint c;
    if (op.text == "requires") {
      c.kind = ConstraintKind::Requires;
    } else if (op.text == "excludes") {
      c.kind = ConstraintKind::Excludes;
    } else {
      lex_.fail(op, "expected 'requires' or 'excludes' but found " + describe(op));
    }
    Token rhs = lex_.expect_ident("constraint feature");
    lex_.expect(";");
    for (const Token* t : {&lhs, &rhs}) {
      if (!model_.contains(t->text)) {
        lex_.fail(*t, "constraint references unknown feature '" + t->text + "'");
      }
    }
    if (lhs.text == rhs.text) {
      lex_.fail(rhs, "constraint relates '" + lhs.text + "' to itself");
    }
    c.lhs = lhs.text;
    c.rhs = rhs.text;
    model_.constraints.push_back(std::move(c));
  }

  Lexer lex_;
  FeatureModel model_;
};

void print_node(const FeatureModel& model, const Feature& f, int depth,
                std::ostringstream& out) {
  std::string indent(2 * depth, ' ');
  out << indent << f.id << (f.variability == Variability::Mandatory ? "!" : "?");
  if (f.children.empty() && !f.group) {
    out << "\n";
    return;
  }
  out << " {\n";
  for (const auto& child : f.children) {
    print_node(model, model.feature(child), depth + 1, out);
  }
  if (f.group) {
    out << indent << "  " << (f.group->kind == GroupKind::Xor ? "xor" : "or") << " { ";
    for (std::size_t i = 0; i < f.group->members.size(); ++i) {
      if (i) out << ", ";
      out << f.group->members[i];
    }
    out << " }\n";
  }
  out << indent << "}\n";
}

std::string join(const std::vector<FeatureId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

FeatureModel parse_feature_model(std::string_view source) {
  return FmlParser(source).parse();
}

std::string print_feature_model(const FeatureModel& model) {
  std::ostringstream out;
  out << "featuremodel " << model.name << " {\n";
  print_node(model, model.feature(model.root), 1, out);
  out << "}\n";
  if (!model.constraints.empty()) {
    out << "constraints {\n";
    for (const auto& c : model.constraints) {
      out << "  " << c.lhs
          << (c.kind == ConstraintKind::Requires ? " requires " : " excludes ")
          << c.rhs << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Configuration checks

ValidationReport validate_configuration(const FeatureModel& model,
                                        const Configuration& config) {
  ValidationReport report;
  auto violate = [&](std::string_view code, std::vector<FeatureId> subjects,
                     std::string message) {
    report.add({std::string(code), std::move(subjects), std::move(message), {}});
  };

  for (const auto& id : config.selected) {
    if (!model.contains(id)) violate(kCfgUnknown, {id}, "unknown feature " + id);
  }
  if (!config.has(model.root)) {
    violate(kCfgRoot, {model.root}, "root feature " + model.root + " not selected");
  }

  for (const auto& id : model.preorder()) {
    const Feature& f = model.feature(id);
    if (!config.has(id)) continue;
    if (f.parent && !config.has(*f.parent)) {
      violate(kCfgParent, {id, *f.parent},
              "parent " + *f.parent + " of selected " + id + " not selected");
    }
    for (const auto& child : f.children) {
      if (model.feature(child).variability == Variability::Mandatory &&
          !config.has(child)) {
        violate(kCfgMandatory, {child, id},
                "mandatory child " + child + " of selected " + id + " not selected");
      }
    }
    if (f.group) {
      std::size_t n = std::count_if(f.group->members.begin(), f.group->members.end(),
                                    [&](const FeatureId& m) { return config.has(m); });
      if (f.group->kind == GroupKind::Xor && n != 1) {
        violate(kCfgXor, f.group->members,
                "xor group of " + id + " needs exactly one of {" +
                    join(f.group->members) + "}, found " + std::to_string(n));
      } else if (f.group->kind == GroupKind::Or && n == 0) {
        violate(kCfgOr, f.group->members,
                "or group of " + id + " needs at least one of {" +
                    join(f.group->members) + "}");
      }
    }
  }

  for (const auto& c : model.constraints) {
    bool l = config.has(c.lhs);
    bool r = config.has(c.rhs);
    if (c.kind == ConstraintKind::Requires && l && !r) {
      violate(kCfgRequires, {c.lhs, c.rhs}, c.lhs + " requires " + c.rhs);
    } else if (c.kind == ConstraintKind::Excludes && l && r) {
      violate(kCfgExcludes, {c.lhs, c.rhs}, c.lhs + " excludes " + c.rhs);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Enumeration. Deliberately a separate bit-mask evaluation of the same
// semantics so the two routes can be checked against each other.

namespace {

struct CompiledModel {
  std::vector<FeatureId> ids;  // sorted; bit i <-> ids[i]
  std::uint32_t root = 0;
  std::vector<std::uint32_t> parent;             // per feature, 0 for root
  std::vector<std::uint32_t> mandatory_children;  // per feature
  struct Group {
    std::uint32_t owner;
    std::uint32_t members;
    GroupKind kind;
  };
  std::vector<Group> groups;
  struct Implication {
    std::uint32_t lhs, rhs;
    ConstraintKind kind;
  };
  std::vector<Implication> constraints;

  bool satisfies(std::uint32_t mask) const {
    if (!(mask & root)) return false;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::uint32_t bit = 1u << i;
      if (!(mask & bit)) continue;
      if (parent[i] && !(mask & parent[i])) return false;
      if ((mask & mandatory_children[i]) != mandatory_children[i]) return false;
    }
    for (const auto& g : groups) {
      if (!(mask & g.owner)) continue;
      int n = __builtin_popcount(mask & g.members);
      if (g.kind == GroupKind::Xor ? n != 1 : n == 0) return false;
    }
    for (const auto& c : constraints) {
      bool l = mask & c.lhs;
      bool r = mask & c.rhs;
      if (c.kind == ConstraintKind::Requires ? (l && !r) : (l && r)) return false;
    }
    return true;
  }
};

CompiledModel compile(const FeatureModel& model) {
  CompiledModel cm;
  for (const auto& [id, f] : model.features) cm.ids.push_back(id);
  auto bit = [&](const FeatureId& id) -> std::uint32_t {
    auto it = std::lower_bound(cm.ids.begin(), cm.ids.end(), id);
    return 1u << static_cast<unsigned>(it - cm.ids.begin());
  };
  cm.root = bit(model.root);
  cm.parent.resize(cm.ids.size(), 0);
  cm.mandatory_children.resize(cm.ids.size(), 0);
  for (std::size_t i = 0; i < cm.ids.size(); ++i) {
    const Feature& f = model.feature(cm.ids[i]);
    if (f.parent) cm.parent[i] = bit(*f.parent);
    for (const auto& child : f.children) {
      if (model.feature(child).variability == Variability::Mandatory) {
        cm.mandatory_children[i] |= bit(child);
      }
    }
    if (f.group) {
      std::uint32_t members = 0;
      for (const auto& m : f.group->members) members |= bit(m);
      cm.groups.push_back({bit(f.id), members, f.group->kind});
    }
  }
  for (const auto& c : model.constraints) {
    cm.constraints.push_back({bit(c.lhs), bit(c.rhs), c.kind});
  }
  return cm;
}

}  // namespace

EnumerationResult enumerate_configurations(const FeatureModel& model, bool with_list,
                                           std::optional<std::size_t> list_limit) {
  if (model.features.size() > kMaxEnumerableFeatures) {
    throw std::length_error("feature model has " +
                            std::to_string(model.features.size()) +
                            " features; brute-force enumeration is limited to " +
                            std::to_string(kMaxEnumerableFeatures));
  }
  CompiledModel cm = compile(model);
  const std::uint32_t total = 1u << cm.ids.size();

  EnumerationResult result;
  std::vector<Configuration> found;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (!cm.satisfies(mask)) continue;
    ++result.count;
    if (with_list) {
      Configuration c;
      for (std::size_t i = 0; i < cm.ids.size(); ++i) {
        if (mask & (1u << i)) c.selected.insert(cm.ids[i]);
      }
      found.push_back(std::move(c));
    }
  }
  if (with_list) {
    // std::set compares as its sorted element sequence.
    std::sort(found.begin(), found.end());
    if (list_limit && found.size() > *list_limit) found.resize(*list_limit);
    result.configurations = std::move(found);
  }
  return result;
}

}  // namespace cgpl
