#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dsl/errors.hpp"

namespace mros::dsl {

enum class TokenKind { Ident, Number, String, Symbol, Newline, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier, symbol, or unescaped string contents
  double number = 0.0;
  SourceLocation where;
};

/// Splits source into tokens. Comments run from '#' to end of line and are
/// dropped; the line break itself is kept as a Newline token, so the parsers
/// can enforce the line structure of blocks.
std::vector<Token> tokenize(std::string_view source);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Quotes `text` with '"' and backslash escapes.
std::string quote(std::string_view text);

/// Cursor over a token stream with the shared expectations of both grammars.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return pos_ + 1 < tokens_.size() ? tokens_[pos_++] : tokens_[pos_]; }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const;
  bool at_symbol(std::string_view sym) const;

  Token expect_ident(std::string_view what);
  void expect_keyword(std::string_view word);
  void expect_symbol(std::string_view sym);
  double expect_number(std::string_view what);
  std::string expect_string(std::string_view what);
  /// Consumes a Newline, or accepts End without consuming it.
  void expect_end_of_line();

  [[noreturn]] void fail(std::string_view expected) const;

  /// Parses `{ ... }`. Either the whole block is on the header's line, or the
  /// header line ends with '{' and every following line holds exactly one
  /// item until a line holding '}'. Blank or comment-only lines are not
  /// allowed inside a block. `item` is called positioned at an item or at
  /// '}', and returns true once it consumed the closing brace.
  template <typename ItemFn>
  void parse_block(ItemFn&& item) {
    expect_symbol("{");
    if (at(TokenKind::Newline)) {
      next();
      for (;;) {
        if (at(TokenKind::Newline))
          throw ParseError(peek().where, "blank or comment-only line inside a block", "block item or '}'");
        if (at(TokenKind::End)) fail("'}'");
        if (item()) return;
        if (!at(TokenKind::Newline)) fail("end of line");
        next();
      }
    }
    for (;;) {
      if (at(TokenKind::Newline) || at(TokenKind::End))
        throw ParseError(peek().where, "block opened inline must close on the same line", "'}'");
      if (item()) return;
    }
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace mros::dsl
