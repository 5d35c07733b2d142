#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace cgpl {

/// Propositional formula over atoms. An atom is either a feature id
/// ("Builder") or a qualified flag-option reference ("Types.default_constructor").
///
///   formula := implication
///   implication := disjunction [ "implies" implication ]
///   disjunction := conjunction { "or" conjunction }
///   conjunction := unary { "and" unary }
///   unary := "not" unary | "(" formula ")" | "true" | "false" | atom
///   atom := IDENT [ "." IDENT ]
class Formula {
 public:
  enum class Op { Const, Atom, Not, And, Or, Implies };

  /// The constant `true`.
  Formula();

  static Formula parse(std::string_view text);
  static Formula constant(bool value);
  static Formula atom(std::string name);

  Op op() const;
  bool evaluate(const std::function<bool(std::string_view)>& truth) const;
  std::set<std::string> atoms() const;

  /// Fully parenthesised canonical text; parse(to_string()) is equivalent.
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.to_string() == b.to_string();
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    return a.to_string() < b.to_string();
  }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace cgpl
