#pragma once

#include <stdexcept>
#include <string>

namespace mros::dsl {

struct SourceLocation {
  int line = 1;
  int column = 1;
};

/// Syntax error. Line and column are 1-based and point into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation where, std::string message, std::string expected = {});

  int line() const noexcept { return where_.line; }
  int column() const noexcept { return where_.column; }
  const std::string& message() const noexcept { return message_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  SourceLocation where_;
  std::string message_;
  std::string expected_;
};

/// The text is well formed but a declaration is inconsistent with what came
/// before it (duplicate id, unknown reference, comparator against polarity).
/// Located at the offending declaration.
class SemanticError : public std::runtime_error {
 public:
  SemanticError(SourceLocation where, std::string subject, const std::string& message);

  int line() const noexcept { return where_.line; }
  int column() const noexcept { return where_.column; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  SourceLocation where_;
  std::string subject_;
};

}  // namespace mros::dsl
