#include "cgpl/class_diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cgpl/lexer.hpp"

namespace cgpl {

bool ClassDecl::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const std::string& decl_name(const TypeDecl& decl) {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, decl);
}

SourceLocation decl_location(const TypeDecl& decl) {
  return std::visit([](const auto& d) { return d.loc; }, decl);
}

std::vector<const ClassDecl*> ClassDiagram::classes() const {
  std::vector<const ClassDecl*> out;
  for (const auto& t : types) {
    if (const auto* c = std::get_if<ClassDecl>(&t)) out.push_back(c);
  }
  return out;
}

const ClassDecl* ClassDiagram::find_class(std::string_view name) const {
  for (const auto* c : classes()) {
    if (c->name == name) return c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// CDL reader

namespace {

class CdlParser {
 public:
  explicit CdlParser(std::string_view source) : lex_(source) {}

  ClassDiagram parse() {
    ClassDiagram d;
    lex_.expect("classdiagram");
    d.name = lex_.expect_ident("diagram name").text;
    lex_.expect("{");
    while (!lex_.peek().is("}")) {
      const Token& head = lex_.peek();
      if (head.is("<<") || head.is("class")) {
        d.types.emplace_back(parse_class());
      } else if (head.is("interface")) {
        d.types.emplace_back(parse_interface());
      } else if (head.is("enum")) {
        d.types.emplace_back(parse_enum());
      } else {
        lex_.fail(head, "expected 'class', 'interface', 'enum' or a tag but found " +
                            describe(head));
      }
    }
    lex_.expect("}");
    if (lex_.peek().kind != TokenKind::End) {
      lex_.fail(lex_.peek(), "expected end of input but found " + describe(lex_.peek()));
    }
    return d;
  }

 private:
  std::string parse_type() { return lex_.expect_ident("type name").text; }

  ClassDecl parse_class() {
    ClassDecl c;
    c.loc = lex_.location();
    while (lex_.accept("<<")) {
      c.tags.push_back(lex_.expect_ident("tag name").text);
      lex_.expect(">>");
    }
    lex_.expect("class");
    c.name = lex_.expect_ident("class name").text;
    if (lex_.accept("extends")) c.superclass = lex_.expect_ident("superclass name").text;
    if (lex_.accept("implements")) {
      c.interfaces.push_back(lex_.expect_ident("interface name").text);
      while (lex_.accept(",")) {
        c.interfaces.push_back(lex_.expect_ident("interface name").text);
      }
    }
    lex_.expect("{");
    while (!lex_.peek().is("}")) {
      Token name = lex_.expect_ident("attribute name");
      lex_.expect(":");
      Attribute a{name.text, parse_type(), name.loc};
      lex_.expect(";");
      for (const auto& prev : c.attributes) {
        if (prev.name == a.name) {
          lex_.fail(name, "duplicate attribute '" + a.name + "' in class '" + c.name + "'");
        }
      }
      c.attributes.push_back(std::move(a));
    }
    lex_.expect("}");
    return c;
  }

  InterfaceDecl parse_interface() {
    InterfaceDecl i;
    i.loc = lex_.expect("interface").loc;
    i.name = lex_.expect_ident("interface name").text;
    lex_.expect("{");
    while (!lex_.peek().is("}")) {
      Token name = lex_.expect_ident("operation name");
      lex_.expect("(");
      lex_.expect(")");
      lex_.expect(":");
      i.operations.push_back({name.text, parse_type(), name.loc});
      lex_.expect(";");
    }
    lex_.expect("}");
    return i;
  }

  EnumDecl parse_enum() {
    EnumDecl e;
    e.loc = lex_.expect("enum").loc;
    e.name = lex_.expect_ident("enum name").text;
    lex_.expect("{");
    do {
      Token constant = lex_.expect_ident("enum constant");
      if (std::find(e.constants.begin(), e.constants.end(), constant.text) !=
          e.constants.end()) {
        lex_.fail(constant, "duplicate constant '" + constant.text + "' in enum '" +
                                e.name + "'");
      }
      e.constants.push_back(constant.text);
    } while (lex_.accept(","));
    lex_.expect("}");
    return e;
  }

  Lexer lex_;
};

void print_decl(const TypeDecl& decl, const std::string& indent, std::ostringstream& out) {
  if (const auto* c = std::get_if<ClassDecl>(&decl)) {
    out << indent;
    for (const auto& tag : c->tags) out << "<<" << tag << ">> ";
    out << "class " << c->name;
    if (c->superclass) out << " extends " << *c->superclass;
    for (std::size_t i = 0; i < c->interfaces.size(); ++i) {
      out << (i == 0 ? " implements " : ", ") << c->interfaces[i];
    }
    out << " {\n";
    for (const auto& a : c->attributes) {
      out << indent << "  " << a.name << ": " << a.type_name << ";\n";
    }
    out << indent << "}\n";
  } else if (const auto* i = std::get_if<InterfaceDecl>(&decl)) {
    out << indent << "interface " << i->name << " {\n";
    for (const auto& op : i->operations) {
      out << indent << "  " << op.name << "(): " << op.return_type << ";\n";
    }
    out << indent << "}\n";
  } else {
    const auto& e = std::get<EnumDecl>(decl);
    out << indent << "enum " << e.name << " { ";
    for (std::size_t k = 0; k < e.constants.size(); ++k) {
      if (k) out << ", ";
      out << e.constants[k];
    }
    out << " }\n";
  }
}

}  // namespace

ClassDiagram parse_class_diagram(std::string_view source) {
  return CdlParser(source).parse();
}

std::string print_class_diagram(const ClassDiagram& diagram) {
  std::ostringstream out;
  out << "classdiagram " << diagram.name << " {\n";
  for (const auto& t : diagram.types) print_decl(t, "  ", out);
  out << "}\n";
  return out.str();
}

std::string print_type_decl(const TypeDecl& decl) {
  std::ostringstream out;
  print_decl(decl, "", out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Symbol table

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Class: return "class";
    case SymbolKind::Interface: return "interface";
    case SymbolKind::Enum: return "enum";
    case SymbolKind::Builtin: return "builtin";
  }
  return "?";
}

const std::vector<std::string>& SymbolTable::builtins() {
  static const std::vector<std::string> names{"int", "boolean", "string"};
  return names;
}

SymbolTable::SymbolTable(const ClassDiagram& diagram) {
  for (const auto& b : builtins()) symbols_.emplace(b, Symbol{SymbolKind::Builtin, nullptr});
  for (const auto& t : diagram.types) {
    SymbolKind kind = std::holds_alternative<ClassDecl>(t)       ? SymbolKind::Class
                      : std::holds_alternative<InterfaceDecl>(t) ? SymbolKind::Interface
                                                                 : SymbolKind::Enum;
    if (!symbols_.emplace(decl_name(t), Symbol{kind, &t}).second) {
      duplicates_.push_back(&t);
    }
  }
}

const Symbol* SymbolTable::lookup(std::string_view name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Core context conditions

namespace {

void cc_unique_names(const ClassDiagram&, const SymbolTable& symbols,
                     ValidationReport& report) {
  for (const TypeDecl* dup : symbols.duplicates()) {
    const std::string& name = decl_name(*dup);
    const Symbol* first = symbols.lookup(name);
    std::string what = first->kind == SymbolKind::Builtin ? "a builtin type"
                                                         : "declared more than once";
    report.add({"CC-01", {name}, "type name " + name + " is " + what,
                decl_location(*dup)});
  }
}

void cc_superclass(const ClassDiagram& d, const SymbolTable& symbols,
                   ValidationReport& report) {
  for (const ClassDecl* c : d.classes()) {
    if (!c->superclass) continue;
    const Symbol* s = symbols.lookup(*c->superclass);
    if (!s) {
      report.add({"CC-02", {*c->superclass},
                  "superclass " + *c->superclass + " of " + c->name + " is not declared",
                  c->loc});
    } else if (s->kind != SymbolKind::Class) {
      report.add({"CC-02", {*c->superclass},
                  "superclass " + *c->superclass + " of " + c->name + " is a " +
                      std::string(to_string(s->kind)) + ", not a class",
                  c->loc});
    }
  }
}

void cc_no_cycles(const ClassDiagram& d, const SymbolTable& symbols,
                  ValidationReport& report) {
  auto super_of = [&](const std::string& name) -> std::optional<std::string> {
    const Symbol* s = symbols.lookup(name);
    if (!s || s->kind != SymbolKind::Class) return std::nullopt;
    return std::get<ClassDecl>(*s->decl).superclass;
  };
  std::set<std::vector<std::string>> seen;
  for (const ClassDecl* c : d.classes()) {
    std::vector<std::string> path{c->name};
    std::optional<std::string> next = super_of(c->name);
    while (next) {
      auto hit = std::find(path.begin(), path.end(), *next);
      if (hit != path.end()) {
        std::vector<std::string> cycle(hit, path.end());
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()),
                    cycle.end());
        if (seen.insert(cycle).second) {
          std::string text;
          for (const auto& n : cycle) text += n + " -> ";
          text += cycle.front();
          const ClassDecl* at = d.find_class(cycle.front());
          report.add({"CC-03", cycle, "inheritance cycle " + text,
                      at ? std::optional(at->loc) : std::nullopt});
        }
        break;
      }
      path.push_back(*next);
      next = super_of(*next);
    }
  }
}

void cc_types_resolve(const ClassDiagram& d, const SymbolTable& symbols,
                      ValidationReport& report) {
  for (const auto& t : d.types) {
    if (const auto* c = std::get_if<ClassDecl>(&t)) {
      for (const auto& a : c->attributes) {
        if (!symbols.resolves(a.type_name)) {
          report.add({"CC-04", {a.type_name},
                      "type " + a.type_name + " of attribute " + c->name + "." + a.name +
                          " does not resolve",
                      a.loc});
        }
      }
    } else if (const auto* i = std::get_if<InterfaceDecl>(&t)) {
      for (const auto& op : i->operations) {
        if (!symbols.resolves(op.return_type)) {
          report.add({"CC-04", {op.return_type},
                      "return type " + op.return_type + " of operation " + i->name + "." +
                          op.name + " does not resolve",
                      op.loc});
        }
      }
    }
  }
}

void cc_implements_interfaces(const ClassDiagram& d, const SymbolTable& symbols,
                              ValidationReport& report) {
  for (const ClassDecl* c : d.classes()) {
    for (const auto& name : c->interfaces) {
      const Symbol* s = symbols.lookup(name);
      if (!s || s->kind != SymbolKind::Interface) {
        report.add({"CC-05", {name},
                    c->name + " implements " + name + ", which is not an interface",
                    c->loc});
      }
    }
  }
}

}  // namespace

std::vector<ContextCondition> core_context_conditions() {
  return {
      {"CC-01", "type names are unique", "core", cc_unique_names},
      {"CC-02", "superclass exists and is a class", "core", cc_superclass},
      {"CC-03", "no inheritance cycles", "core", cc_no_cycles},
      {"CC-04", "attribute and return types resolve", "core", cc_types_resolve},
      {"CC-05", "implemented names are interfaces", "core", cc_implements_interfaces},
  };
}

ValidationReport check_context_conditions(const ClassDiagram& diagram,
                                          const std::vector<ContextCondition>& conditions) {
  std::set<std::string> codes;
  for (const auto& c : conditions) {
    if (!codes.insert(c.code).second) {
      throw std::invalid_argument("context condition code " + c.code +
                                  " is contributed twice");
    }
  }
  SymbolTable symbols(diagram);
  ValidationReport report;
  for (const auto& c : conditions) {
    if (c.check) c.check(diagram, symbols, report);
  }
  return report;
}

}  // namespace cgpl
