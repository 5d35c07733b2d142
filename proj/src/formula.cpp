#include "cgpl/formula.hpp"

#include "cgpl/lexer.hpp"

namespace cgpl {

struct Formula::Node {
  Op op = Op::Const;
  bool value = true;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

NodePtr make(Formula::Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Formula::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_keyword(std::string_view w) {
  return w == "and" || w == "or" || w == "not" || w == "implies" || w == "true" ||
         w == "false";
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : lex_(text) {}

  NodePtr parse() {
    NodePtr n = implication();
    if (lex_.peek().kind != TokenKind::End) {
      lex_.fail(lex_.peek(), "unexpected " + describe(lex_.peek()) + " in formula");
    }
    return n;
  }

 private:
  NodePtr implication() {
    NodePtr lhs = disjunction();
    if (lex_.accept("implies")) return make(Formula::Op::Implies, lhs, implication());
    return lhs;
  }
  NodePtr disjunction() {
    NodePtr n = conjunction();
    while (lex_.accept("or")) n = make(Formula::Op::Or, n, conjunction());
    return n;
  }
  NodePtr conjunction() {
    NodePtr n = unary();
    while (lex_.accept("and")) n = make(Formula::Op::And, n, unary());
    return n;
  }
  NodePtr unary() {
    if (lex_.accept("not")) return make(Formula::Op::Not, unary());
    if (lex_.accept("(")) {
      NodePtr n = implication();
      lex_.expect(")");
      return n;
    }
    Token t = lex_.expect_ident("feature or option reference");
    if (t.text == "true" || t.text == "false") {
      auto n = std::make_shared<Formula::Node>();
      n->op = Formula::Op::Const;
      n->value = t.text == "true";
      return n;
    }
    if (is_keyword(t.text)) lex_.fail(t, "unexpected keyword '" + t.text + "'");
    auto n = std::make_shared<Formula::Node>();
    n->op = Formula::Op::Atom;
    n->name = t.text;
    if (lex_.accept(".")) n->name += "." + lex_.expect_ident("option name").text;
    return n;
  }

  Lexer lex_;
};

bool eval(const Formula::Node& n, const std::function<bool(std::string_view)>& truth) {
  switch (n.op) {
    case Formula::Op::Const: return n.value;
    case Formula::Op::Atom: return truth(n.name);
    case Formula::Op::Not: return !eval(*n.lhs, truth);
    case Formula::Op::And: return eval(*n.lhs, truth) && eval(*n.rhs, truth);
    case Formula::Op::Or: return eval(*n.lhs, truth) || eval(*n.rhs, truth);
    case Formula::Op::Implies: return !eval(*n.lhs, truth) || eval(*n.rhs, truth);
  }
  return false;
}

void collect(const Formula::Node& n, std::set<std::string>& out) {
  if (n.op == Formula::Op::Atom) out.insert(n.name);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

std::string print(const Formula::Node& n) {
  switch (n.op) {
    case Formula::Op::Const: return n.value ? "true" : "false";
    case Formula::Op::Atom: return n.name;
    case Formula::Op::Not: return "not " + print(*n.lhs);
    case Formula::Op::And: return "(" + print(*n.lhs) + " and " + print(*n.rhs) + ")";
    case Formula::Op::Or: return "(" + print(*n.lhs) + " or " + print(*n.rhs) + ")";
    case Formula::Op::Implies:
      return "(" + print(*n.lhs) + " implies " + print(*n.rhs) + ")";
  }
  return "";
}

}  // namespace

Formula::Formula() : Formula(constant(true)) {}

Formula Formula::parse(std::string_view text) { return Formula(FormulaParser(text).parse()); }

Formula Formula::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Formula(std::move(n));
}

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula::Op Formula::op() const { return node_->op; }

bool Formula::evaluate(const std::function<bool(std::string_view)>& truth) const {
  return eval(*node_, truth);
}

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  collect(*node_, out);
  return out;
}

std::string Formula::to_string() const { return print(*node_); }

}  // namespace cgpl
