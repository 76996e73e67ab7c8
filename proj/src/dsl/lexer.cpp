#include "dsl/lexer.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace mros::dsl {

ParseError::ParseError(SourceLocation where, std::string message, std::string expected)
    : std::runtime_error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      where_(where),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

SemanticError::SemanticError(SourceLocation where, std::string subject, const std::string& message)
    : std::runtime_error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
      where_(where),
      subject_(std::move(subject)) {}

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::Ident: return "'" + tok.text + "'";
    case TokenKind::Number: return "number " + format_number(tok.number);
    case TokenKind::String: return "string " + quote(tok.text);
    case TokenKind::Symbol: return "'" + tok.text + "'";
    case TokenKind::Newline: return "end of line";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto here = [&](std::size_t at) { return SourceLocation{line, static_cast<int>(at - line_start) + 1}; };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (c == '\n') {
      out.push_back({TokenKind::Newline, {}, 0.0, here(i)});
      ++i;
      ++line;
      line_start = i;
    } else if (is_ident_start(c)) {
      std::size_t b = i;
      while (i < src.size() && is_ident_char(src[i])) ++i;
      out.push_back({TokenKind::Ident, std::string(src.substr(b, i - b)), 0.0, here(b)});
    } else if (is_digit(c) || ((c == '-' || c == '+') && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t b = i;
      if (c == '-' || c == '+') ++i;
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      const char* first = src.data() + b + (c == '+' ? 1 : 0);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, src.data() + i, v);
      if (ec != std::errc() || ptr != src.data() + i || !std::isfinite(v))
        throw ParseError(here(b), "number out of range", "finite number");
      out.push_back({TokenKind::Number, std::string(src.substr(b, i - b)), v, here(b)});
    } else if (c == '"') {
      std::size_t b = i++;
      std::string text;
      for (;;) {
        if (i >= src.size() || src[i] == '\n') throw ParseError(here(b), "unterminated string", "'\"'");
        if (src[i] == '"') {
          ++i;
          break;
        }
        if (src[i] == '\\' && i + 1 < src.size() && (src[i + 1] == '"' || src[i + 1] == '\\')) ++i;
        text.push_back(src[i++]);
      }
      out.push_back({TokenKind::String, std::move(text), 0.0, here(b)});
    } else if (c == '{' || c == '}' || c == '=' || c == ',') {
      out.push_back({TokenKind::Symbol, std::string(1, c), 0.0, here(i)});
      ++i;
    } else if (c == '>' || c == '<') {
      if (i + 1 >= src.size() || src[i + 1] != '=')
        throw ParseError(here(i), "incomplete comparator", c == '>' ? "'>='" : "'<='");
      out.push_back({TokenKind::Symbol, std::string(src.substr(i, 2)), 0.0, here(i)});
      i += 2;
    } else {
      throw ParseError(here(i), "unexpected character");
    }
  }
  out.push_back({TokenKind::End, {}, 0.0, here(i)});
  return out;
}

std::string format_number(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool TokenCursor::at_keyword(std::string_view word) const {
  return peek().kind == TokenKind::Ident && peek().text == word;
}

bool TokenCursor::at_symbol(std::string_view sym) const {
  return peek().kind == TokenKind::Symbol && peek().text == sym;
}

void TokenCursor::fail(std::string_view expected) const {
  throw ParseError(peek().where, "unexpected " + describe(peek()), std::string(expected));
}

Token TokenCursor::expect_ident(std::string_view what) {
  if (!at(TokenKind::Ident)) fail(what);
  return next();
}

void TokenCursor::expect_keyword(std::string_view word) {
  if (!at_keyword(word)) fail("'" + std::string(word) + "'");
  next();
}

void TokenCursor::expect_symbol(std::string_view sym) {
  if (!at_symbol(sym)) fail("'" + std::string(sym) + "'");
  next();
}

double TokenCursor::expect_number(std::string_view what) {
  if (!at(TokenKind::Number)) fail(what);
  return next().number;
}

std::string TokenCursor::expect_string(std::string_view what) {
  if (!at(TokenKind::String)) fail(what);
  return next().text;
}

void TokenCursor::expect_end_of_line() {
  if (at(TokenKind::End)) return;
  if (!at(TokenKind::Newline)) fail("end of line");
  next();
}

}  // namespace mros::dsl
