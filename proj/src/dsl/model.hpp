#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsl/errors.hpp"
#include "kb/knowledge_base.hpp"

namespace mros::dsl {

struct QATypeDecl {
  std::string id;
  kb::Polarity polarity = kb::Polarity::HigherIsBetter;
  bool operator==(const QATypeDecl&) const = default;
};

struct FunctionDecl {
  std::string id;
  bool operator==(const FunctionDecl&) const = default;
};

struct DesignDecl {
  std::string id;
  std::string solves;
  std::vector<kb::QAValue> qas;
  std::string config;
  bool operator==(const DesignDecl&) const = default;
};

enum class Comparator { AtLeast, AtMost };

struct RequireClause {
  std::string type_id;
  Comparator cmp = Comparator::AtLeast;
  double threshold = 0.0;
  bool operator==(const RequireClause&) const = default;
};

struct ObjectiveDecl {
  std::string id;
  std::string of_function;
  std::vector<RequireClause> requirements;
  bool operator==(const ObjectiveDecl&) const = default;
};

using DeclBody = std::variant<QATypeDecl, FunctionDecl, DesignDecl, ObjectiveDecl>;

struct Declaration {
  DeclBody body;
  SourceLocation where;

  /// Structural: the source location does not take part.
  bool operator==(const Declaration& o) const { return body == o.body; }
};

struct ModelDocument {
  std::vector<Declaration> declarations;
  bool operator==(const ModelDocument&) const = default;
};

/// Syntax only. Throws ParseError.
ModelDocument parse_model_syntax(std::string_view source);

/// Syntax, then semantic validation. Throws ParseError or SemanticError.
ModelDocument parse_model(std::string_view source);

/// Canonical text: one declaration per block, two-space indentation.
std::string serialize_model(const ModelDocument& doc);

/// Loads declarations in order into a fresh knowledge base. A declaration
/// may only reference earlier ones. Throws SemanticError located at the
/// offending declaration.
kb::KnowledgeBase build_knowledge_base(const ModelDocument& doc);

}  // namespace mros::dsl
