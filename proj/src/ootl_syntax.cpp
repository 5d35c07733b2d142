#include "cgpl/ootl_syntax.hpp"

#include <array>
#include <algorithm>

#include "cgpl/lexer.hpp"

namespace cgpl {

namespace {

constexpr std::array<std::string_view, 13> kReserved = {
    "package", "class", "interface", "enum",   "extends", "implements", "new",
    "this",    "return", "int",      "boolean", "string", "void"};

constexpr std::array<std::string_view, 4> kBuiltinTypes = {"int", "boolean", "string", "void"};

bool reserved(std::string_view w) {
  return std::find(kReserved.begin(), kReserved.end(), w) != kReserved.end();
}

// Recursive descent over the grammar:
//   unit     := "package" IDENT ";" typedecl
//   classd   := "class" IDENT ["extends" IDENT] ["implements" IDENT {"," IDENT}] "{" {member} "}"
//   member   := type IDENT ";" | IDENT "(" [params] ")" block
//             | type IDENT "(" [params] ")" (block | ";")
//   ifaced   := "interface" IDENT "{" { type IDENT "(" [params] ")" ";" } "}"
//   enumd    := "enum" IDENT "{" IDENT {"," IDENT} "}"
//   stmt     := type IDENT "=" expr ";" | lval "=" expr ";" | "return" [expr] ";" | expr ";"
//   expr     := "new" IDENT "(" ")" | "this" | lval | lval "(" [expr {"," expr}] ")"
class OotlParser {
 public:
  explicit OotlParser(std::string_view content) : lex_(content, /*line_comments=*/false) {}

  void unit() {
    lex_.expect("package");
    ident("package name");
    lex_.expect(";");
    const Token& head = lex_.peek();
    if (head.is("class")) {
      class_decl();
    } else if (head.is("interface")) {
      interface_decl();
    } else if (head.is("enum")) {
      enum_decl();
    } else {
      lex_.fail(head, "expected type declaration but found " + describe(head));
    }
    if (lex_.peek().kind != TokenKind::End) {
      lex_.fail(lex_.peek(), "expected end of input but found " + describe(lex_.peek()));
    }
  }

 private:
  bool at_ident() { return at_ident(lex_.peek()); }
  static bool at_ident(const Token& t) { return t.kind == TokenKind::Ident && !reserved(t.text); }

  bool at_type(const Token& t) {
    return at_ident(t) || (t.kind == TokenKind::Ident &&
                           std::find(kBuiltinTypes.begin(), kBuiltinTypes.end(), t.text) !=
                               kBuiltinTypes.end());
  }

  void ident(std::string_view what) {
    if (!at_ident()) {
      lex_.fail(lex_.peek(), "expected " + std::string(what) + " but found " + describe(lex_.peek()));
    }
    lex_.next();
  }

  void type() {
    if (!at_type(lex_.peek())) {
      lex_.fail(lex_.peek(), "expected type but found " + describe(lex_.peek()));
    }
    lex_.next();
  }

  Token peek2() {
    Lexer probe = lex_;
    probe.next();
    return probe.peek();
  }

  void class_decl() {
    lex_.expect("class");
    ident("class name");
    if (lex_.accept("extends")) ident("superclass name");
    if (lex_.accept("implements")) {
      ident("interface name");
      while (lex_.accept(",")) ident("interface name");
    }
    lex_.expect("{");
    while (!lex_.peek().is("}")) member();
    lex_.expect("}");
  }

  void member() {
    if (at_ident() && peek2().is("(")) {
      lex_.next();
      params();
      block();
      return;
    }
    type();
    ident("member name");
    if (lex_.accept(";")) return;
    params();
    if (lex_.accept(";")) return;
    block();
  }

  void params() {
    lex_.expect("(");
    if (lex_.accept(")")) return;
    type();
    ident("parameter name");
    while (lex_.accept(",")) {
      type();
      ident("parameter name");
    }
    lex_.expect(")");
  }

  void interface_decl() {
    lex_.expect("interface");
    ident("interface name");
    lex_.expect("{");
    while (!lex_.peek().is("}")) {
      type();
      ident("method name");
      params();
      lex_.expect(";");
    }
    lex_.expect("}");
  }

  void enum_decl() {
    lex_.expect("enum");
    ident("enum name");
    lex_.expect("{");
    ident("enum constant");
    while (lex_.accept(",")) ident("enum constant");
    lex_.expect("}");
  }

  void block() {
    lex_.expect("{");
    while (!lex_.peek().is("}")) statement();
    lex_.expect("}");
  }

  void statement() {
    const Token& head = lex_.peek();
    if (head.is("return")) {
      lex_.next();
      if (!lex_.peek().is(";")) expr();
      lex_.expect(";");
      return;
    }
    if (head.is("new") || head.is("this")) {
      expr();
      lex_.expect(";");
      return;
    }
    bool declaration = (at_type(head) && !at_ident(head)) ||
                       (at_ident(head) && at_ident(peek2()));
    if (declaration) {
      type();
      ident("variable name");
      lex_.expect("=");
      expr();
      lex_.expect(";");
      return;
    }
    lval();
    if (lex_.accept("=")) {
      expr();
    } else if (lex_.peek().is("(")) {
      call_args();
    }
    lex_.expect(";");
  }

  void lval() {
    ident("identifier");
    while (lex_.accept(".")) ident("member name");
  }

  void call_args() {
    lex_.expect("(");
    if (lex_.accept(")")) return;
    expr();
    while (lex_.accept(",")) expr();
    lex_.expect(")");
  }

  void expr() {
    if (lex_.accept("new")) {
      ident("type name");
      lex_.expect("(");
      lex_.expect(")");
      return;
    }
    if (lex_.accept("this")) return;
    lval();
    if (lex_.peek().is("(")) call_args();
  }

  Lexer lex_;
};

}  // namespace

SyntaxStatus check_ootl_syntax(std::string_view content) {
  SyntaxStatus status;
  try {
    OotlParser(content).unit();
    status.kind = SyntaxStatus::Kind::Valid;
  } catch (const ParseError& e) {
    status.kind = SyntaxStatus::Kind::Invalid;
    status.message = e.detail();
    status.where = e.location();
  }
  return status;
}

const SyntaxStatus& validate_syntax(ArtifactContainer& container) {
  container.set_syntax_status(check_ootl_syntax(container.content()));
  return container.syntax_status();
}

}  // namespace cgpl
