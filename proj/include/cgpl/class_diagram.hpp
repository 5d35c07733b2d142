#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgpl/diagnostics.hpp"

namespace cgpl {

struct Attribute {
  std::string name;
  std::string type_name;
  SourceLocation loc;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Operation {
  std::string name;
  std::string return_type;
  SourceLocation loc;

  friend bool operator==(const Operation&, const Operation&) = default;
};

struct ClassDecl {
  std::string name;
  std::vector<std::string> tags;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::vector<Attribute> attributes;
  SourceLocation loc;

  bool has_tag(std::string_view tag) const;

  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct InterfaceDecl {
  std::string name;
  std::vector<Operation> operations;
  SourceLocation loc;

  friend bool operator==(const InterfaceDecl&, const InterfaceDecl&) = default;
};

struct EnumDecl {
  std::string name;
  std::vector<std::string> constants;
  SourceLocation loc;

  friend bool operator==(const EnumDecl&, const EnumDecl&) = default;
};

using TypeDecl = std::variant<ClassDecl, InterfaceDecl, EnumDecl>;

const std::string& decl_name(const TypeDecl& decl);
SourceLocation decl_location(const TypeDecl& decl);

struct ClassDiagram {
  std::string name;
  std::vector<TypeDecl> types;

  std::vector<const ClassDecl*> classes() const;
  const ClassDecl* find_class(std::string_view name) const;

  friend bool operator==(const ClassDiagram&, const ClassDiagram&) = default;
};

ClassDiagram parse_class_diagram(std::string_view source);

/// Canonical CDL text without positions. Used both for printing and as
/// the cache-key input element of a declaration.
std::string print_class_diagram(const ClassDiagram& diagram);
std::string print_type_decl(const TypeDecl& decl);

enum class SymbolKind { Class, Interface, Enum, Builtin };

std::string_view to_string(SymbolKind kind);

struct Symbol {
  SymbolKind kind = SymbolKind::Builtin;
  const TypeDecl* decl = nullptr;  // null for builtins
};

/// Name resolution over one diagram. Holds pointers into the diagram, so
/// the diagram must outlive the table.
class SymbolTable {
 public:
  static const std::vector<std::string>& builtins();

  explicit SymbolTable(const ClassDiagram& diagram);

  const Symbol* lookup(std::string_view name) const;
  bool resolves(std::string_view name) const { return lookup(name) != nullptr; }

  /// Declarations whose name was already taken (by a builtin or an
  /// earlier declaration).
  const std::vector<const TypeDecl*>& duplicates() const { return duplicates_; }

 private:
  std::map<std::string, Symbol, std::less<>> symbols_;
  std::vector<const TypeDecl*> duplicates_;
};

using ConditionCheck = std::function<void(const ClassDiagram&, const SymbolTable&,
                                          ValidationReport&)>;

struct ContextCondition {
  std::string code;
  std::string description;
  std::string origin;  // contributing component id, or "core"
  ConditionCheck check;
};

/// CC-01 .. CC-05.
std::vector<ContextCondition> core_context_conditions();

/// Builds the symbol table and evaluates each condition in order. Throws
/// std::invalid_argument if two conditions share a code.
ValidationReport check_context_conditions(const ClassDiagram& diagram,
                                          const std::vector<ContextCondition>& conditions);

}  // namespace cgpl
