#include "cgpl/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace cgpl {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

constexpr std::string_view kPunct = "{}()[]:;,.=!?";

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text.front())) return false;
  return std::all_of(text.begin(), text.end(), ident_char);
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::End:
      return "end of input";
    case TokenKind::String:
      return "string \"" + tok.text + "\"";
    default:
      return "'" + tok.text + "'";
  }
}

Lexer::Lexer(std::string_view source, bool line_comments)
    : src_(source), line_comments_(line_comments) {}

void Lexer::advance() {
  if (pos_ >= src_.size()) return;
  if (src_[pos_] == '\n') {
    ++loc_.line;
    loc_.column = 1;
  } else {
    ++loc_.column;
  }
  ++pos_;
}

void Lexer::skip_trivia() {
  for (;;) {
    char c = cur();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (line_comments_ && c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      while (pos_ < src_.size() && cur() != '\n') advance();
    } else {
      return;
    }
  }
}

Token Lexer::scan() {
  skip_trivia();
  Token tok;
  tok.loc = loc_;
  if (pos_ >= src_.size()) {
    tok.kind = TokenKind::End;
    return tok;
  }
  char c = cur();
  if (ident_start(c)) {
    tok.kind = TokenKind::Ident;
    while (ident_char(cur()) && pos_ < src_.size()) {
      tok.text.push_back(cur());
      advance();
    }
    return tok;
  }
  if ((c == '<' || c == '>') && pos_ + 1 < src_.size() && src_[pos_ + 1] == c) {
    tok.kind = TokenKind::Punct;
    tok.text = std::string(2, c);
    advance();
    advance();
    return tok;
  }
  if (kPunct.find(c) != std::string_view::npos) {
    tok.kind = TokenKind::Punct;
    tok.text = std::string(1, c);
    advance();
    return tok;
  }
  if (c == '"') {
    tok.kind = TokenKind::String;
    advance();
    for (;;) {
      if (pos_ >= src_.size() || cur() == '\n') {
        throw ParseError(tok.loc, "unterminated string");
      }
      char ch = cur();
      if (ch == '"') {
        advance();
        break;
      }
      if (ch == '\\') {
        advance();
        char esc = cur();
        switch (esc) {
          case '"':
          case '\\':
            tok.text.push_back(esc);
            break;
          case 'n':
            tok.text.push_back('\n');
            break;
          default:
            throw ParseError(loc_, std::string("unknown escape '\\") + esc + "'");
        }
        advance();
        continue;
      }
      tok.text.push_back(ch);
      advance();
    }
    return tok;
  }
  throw ParseError(loc_, std::string("unexpected character '") + c + "'");
}

const Token& Lexer::peek() {
  if (!lookahead_) {
    skip_trivia();
    lookahead_pos_ = pos_;
    lookahead_loc_ = loc_;
    lookahead_ = scan();
  }
  return *lookahead_;
}

Token Lexer::next() {
  peek();
  Token tok = std::move(*lookahead_);
  lookahead_.reset();
  return tok;
}

bool Lexer::accept(std::string_view text) {
  const Token& tok = peek();
  if ((tok.kind == TokenKind::Punct || tok.kind == TokenKind::Ident) &&
      tok.text == text) {
    next();
    return true;
  }
  return false;
}

Token Lexer::expect(std::string_view text) {
  const Token& tok = peek();
  if ((tok.kind == TokenKind::Punct || tok.kind == TokenKind::Ident) &&
      tok.text == text) {
    return next();
  }
  fail(tok, "expected '" + std::string(text) + "' but found " + describe(tok));
}

Token Lexer::expect_ident(std::string_view what) {
  const Token& tok = peek();
  if (tok.kind != TokenKind::Ident) {
    fail(tok, "expected " + std::string(what) + " but found " + describe(tok));
  }
  return next();
}

std::string Lexer::raw_until(char stop, std::string_view what) {
  if (lookahead_) {
    pos_ = lookahead_pos_;
    loc_ = lookahead_loc_;
    lookahead_.reset();
  }
  skip_trivia();
  SourceLocation start = loc_;
  std::string out;
  while (pos_ < src_.size() && cur() != stop && cur() != '\n') {
    out.push_back(cur());
    advance();
  }
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) {
    out.pop_back();
  }
  if (out.empty()) {
    throw ParseError(start, "expected " + std::string(what));
  }
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

SourceLocation Lexer::location() { return peek().loc; }

void Lexer::fail(const Token& at, const std::string& message) const {
  throw ParseError(at.loc, message);
}

}  // namespace cgpl
