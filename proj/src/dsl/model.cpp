#include "dsl/model.hpp"

#include "dsl/lexer.hpp"

namespace mros::dsl {

namespace {

QATypeDecl parse_qa_type(TokenCursor& in) {
  QATypeDecl d;
  d.id = in.expect_ident("qa_type id").text;
  if (in.at_keyword("higher_is_better")) {
    d.polarity = kb::Polarity::HigherIsBetter;
  } else if (in.at_keyword("lower_is_better")) {
    d.polarity = kb::Polarity::LowerIsBetter;
  } else {
    in.fail("'higher_is_better' or 'lower_is_better'");
  }
  in.next();
  return d;
}

DesignDecl parse_design(TokenCursor& in) {
  DesignDecl d;
  d.id = in.expect_ident("design id").text;
  in.expect_keyword("solves");
  d.solves = in.expect_ident("function id").text;
  bool have_config = false;
  in.parse_block([&] {
    if (!have_config && in.at_keyword("qa")) {
      in.next();
      kb::QAValue qa;
      qa.type_id = in.expect_ident("qa_type id").text;
      in.expect_symbol("=");
      qa.value = in.expect_number("number");
      d.qas.push_back(std::move(qa));
      return false;
    }
    if (!have_config && in.at_keyword("config")) {
      in.next();
      d.config = in.expect_string("configuration name string");
      have_config = true;
      return false;
    }
    if (have_config && in.at_symbol("}")) {
      in.next();
      return true;
    }
    in.fail(have_config ? "'}'" : "'qa' or 'config'");
  });
  return d;
}

ObjectiveDecl parse_objective(TokenCursor& in) {
  ObjectiveDecl d;
  d.id = in.expect_ident("objective id").text;
  in.expect_keyword("of");
  d.of_function = in.expect_ident("function id").text;
  in.parse_block([&] {
    if (in.at_keyword("require")) {
      in.next();
      RequireClause r;
      r.type_id = in.expect_ident("qa_type id").text;
      if (in.at_symbol(">=")) {
        r.cmp = Comparator::AtLeast;
      } else if (in.at_symbol("<=")) {
        r.cmp = Comparator::AtMost;
      } else {
        in.fail("'>=' or '<='");
      }
      in.next();
      r.threshold = in.expect_number("number");
      d.requirements.push_back(std::move(r));
      return false;
    }
    if (in.at_symbol("}")) {
      in.next();
      return true;
    }
    in.fail("'require' or '}'");
  });
  return d;
}

[[noreturn]] void semantic(const Declaration& decl, std::string subject, const std::string& message) {
  throw SemanticError(decl.where, std::move(subject), message);
}

}  // namespace

ModelDocument parse_model_syntax(std::string_view source) {
  TokenCursor in(tokenize(source));
  ModelDocument doc;
  for (;;) {
    while (in.at(TokenKind::Newline)) in.next();
    if (in.at(TokenKind::End)) break;
    const SourceLocation where = in.peek().where;
    if (in.at_keyword("qa_type")) {
      in.next();
      doc.declarations.push_back({parse_qa_type(in), where});
    } else if (in.at_keyword("function")) {
      in.next();
      doc.declarations.push_back({FunctionDecl{in.expect_ident("function id").text}, where});
    } else if (in.at_keyword("design")) {
      in.next();
      doc.declarations.push_back({parse_design(in), where});
    } else if (in.at_keyword("objective")) {
      in.next();
      doc.declarations.push_back({parse_objective(in), where});
    } else {
      in.fail("'qa_type', 'function', 'design' or 'objective'");
    }
    in.expect_end_of_line();
  }
  return doc;
}

ModelDocument parse_model(std::string_view source) {
  ModelDocument doc = parse_model_syntax(source);
  build_knowledge_base(doc);
  return doc;
}

kb::KnowledgeBase build_knowledge_base(const ModelDocument& doc) {
  kb::KnowledgeBase kb;
  for (const auto& decl : doc.declarations) {
    try {
      if (const auto* q = std::get_if<QATypeDecl>(&decl.body)) {
        kb.insert(kb::QualityAttributeType{q->id, q->polarity, {}});
      } else if (const auto* f = std::get_if<FunctionDecl>(&decl.body)) {
        kb.insert(kb::Function{f->id, {}});
      } else if (const auto* d = std::get_if<DesignDecl>(&decl.body)) {
        if (d->config.empty()) semantic(decl, d->id, "design '" + d->id + "' has an empty config reference");
        kb.insert(kb::FunctionDesign{d->id, d->solves, d->qas, d->config, false});
      } else if (const auto* o = std::get_if<ObjectiveDecl>(&decl.body)) {
        kb::Objective obj{o->id, o->of_function, {}, kb::ObjectiveStatus::Ungrounded};
        for (const auto& r : o->requirements) {
          if (const auto* qa = kb.find_qa_type(r.type_id)) {
            const auto natural = qa->polarity == kb::Polarity::HigherIsBetter ? Comparator::AtLeast
                                                                                : Comparator::AtMost;
            if (r.cmp != natural)
              semantic(decl, r.type_id,
                       "comparator for '" + r.type_id + "' contradicts its polarity " +
                           std::string(kb::to_string(qa->polarity)));
          }
          obj.nfrs.push_back({r.type_id, r.threshold});
        }
        kb.insert(std::move(obj));
      }
    } catch (const kb::KbError& e) {
      semantic(decl, e.subject(), e.what());
    }
  }
  return kb;
}

std::string serialize_model(const ModelDocument& doc) {
  std::string out;
  for (const auto& decl : doc.declarations) {
    if (const auto* q = std::get_if<QATypeDecl>(&decl.body)) {
      out += "qa_type " + q->id + " " + std::string(kb::to_string(q->polarity)) + "\n";
    } else if (const auto* f = std::get_if<FunctionDecl>(&decl.body)) {
      out += "function " + f->id + "\n";
    } else if (const auto* d = std::get_if<DesignDecl>(&decl.body)) {
      out += "design " + d->id + " solves " + d->solves + " {\n";
      for (const auto& qa : d->qas) out += "  qa " + qa.type_id + " = " + format_number(qa.value) + "\n";
      out += "  config " + quote(d->config) + "\n}\n";
    } else if (const auto* o = std::get_if<ObjectiveDecl>(&decl.body)) {
      out += "objective " + o->id + " of " + o->of_function + " {\n";
      for (const auto& r : o->requirements)
        out += "  require " + r.type_id + (r.cmp == Comparator::AtLeast ? " >= " : " <= ") +
               format_number(r.threshold) + "\n";
      out += "}\n";
    }
  }
  return out;
}

}  // namespace mros::dsl
