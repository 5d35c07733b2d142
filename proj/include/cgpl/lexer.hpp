#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cgpl/diagnostics.hpp"

namespace cgpl {

enum class TokenKind { Ident, Punct, String, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // unescaped contents for String
  SourceLocation loc;

  bool is(std::string_view punct_or_word) const {
    return (kind == TokenKind::Punct || kind == TokenKind::Ident) &&
           text == punct_or_word;
  }
};

/// Pull lexer shared by the small text formats. Identifiers are
/// [A-Za-z_][A-Za-z0-9_]*; punctuation is single-character except "<<"
/// and ">>"; strings are double-quoted with \" \\ \n escapes; "//"
/// starts a line comment unless disabled. Keywords are not reserved at
/// this level.
class Lexer {
 public:
  explicit Lexer(std::string_view source, bool line_comments = true);

  const Token& peek();
  Token next();

  /// Consumes the next token if it matches.
  bool accept(std::string_view text);
  Token expect(std::string_view text);
  Token expect_ident(std::string_view what = "identifier");

  /// Reads raw characters up to (not including) `stop`, trimming
  /// surrounding whitespace. Used for unquoted paths.
  std::string raw_until(char stop, std::string_view what);

  SourceLocation location();

  [[noreturn]] void fail(const Token& at, const std::string& message) const;

 private:
  Token scan();
  void skip_trivia();
  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  void advance();

  std::string_view src_;
  bool line_comments_ = true;
  std::size_t pos_ = 0;
  SourceLocation loc_;
  std::optional<Token> lookahead_;
  std::size_t lookahead_pos_ = 0;
  SourceLocation lookahead_loc_;
};

std::string describe(const Token& tok);

bool is_identifier(std::string_view text);

}  // namespace cgpl
