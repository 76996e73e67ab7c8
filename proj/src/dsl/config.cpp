#include "dsl/config.hpp"

#include <algorithm>

#include "dsl/lexer.hpp"

namespace mros::dsl {

namespace {

std::vector<std::string> parse_string_list(TokenCursor& in, std::string_view what) {
  std::vector<std::string> out;
  out.push_back(in.expect_string(what));
  while (in.at_symbol(",")) {
    in.next();
    out.push_back(in.expect_string(what));
  }
  return out;
}

ConfigurationSpec parse_configuration(TokenCursor& in) {
  ConfigurationSpec spec;
  spec.fd_id = in.expect_ident("function design id").text;
  bool have_restart = false;
  in.parse_block([&] {
    if (!have_restart && in.at_keyword("param")) {
      in.next();
      const Token name = in.expect_ident("parameter name");
      if (spec.param(name.text))
        throw ParseError(name.where, "duplicate parameter '" + name.text + "'");
      in.expect_symbol("=");
      spec.params.emplace_back(name.text, in.expect_number("number"));
      return false;
    }
    if (!have_restart && !spec.params.empty() && in.at_keyword("restart")) {
      in.next();
      spec.restart_components = parse_string_list(in, "component name string");
      have_restart = true;
      return false;
    }
    if (in.at_symbol("}")) {
      if (spec.params.empty()) throw ParseError(in.peek().where, "configuration without parameters", "'param'");
      in.next();
      return true;
    }
    if (spec.params.empty()) in.fail("'param'");
    in.fail(have_restart ? "'}'" : "'param', 'restart' or '}'");
  });
  return spec;
}

}  // namespace

const double* ConfigurationSpec::param(std::string_view name) const {
  for (const auto& [k, v] : params)
    if (k == name) return &v;
  return nullptr;
}

const ConfigurationSpec* MetacontrolConfig::find(std::string_view fd_id) const {
  for (const auto& c : configurations)
    if (c.fd_id == fd_id) return &c;
  return nullptr;
}

MetacontrolConfig parse_metacontrol_config(std::string_view source) {
  TokenCursor in(tokenize(source));
  MetacontrolConfig cfg;
  // Sections must appear in this order, each trailing one at most once.
  enum Stage { Configurations, Kill, SaveGoal, Latency, Done } stage = Configurations;
  for (;;) {
    while (in.at(TokenKind::Newline)) in.next();
    if (in.at(TokenKind::End)) break;
    if (stage == Configurations && in.at_keyword("configuration")) {
      in.next();
      const Token& id_tok = in.peek();
      const SourceLocation id_at = id_tok.where;
      ConfigurationSpec spec = parse_configuration(in);
      if (cfg.find(spec.fd_id))
        throw ParseError(id_at, "duplicate configuration '" + spec.fd_id + "'");
      cfg.configurations.push_back(std::move(spec));
    } else if (stage <= Configurations && in.at_keyword("kill_components")) {
      in.next();
      cfg.kill_components = parse_string_list(in, "component name string");
      stage = Kill;
    } else if (stage <= Kill && in.at_keyword("save_goal")) {
      in.next();
      if (in.at_keyword("true")) {
        cfg.save_goal = true;
      } else if (in.at_keyword("false")) {
        cfg.save_goal = false;
      } else {
        in.fail("'true' or 'false'");
      }
      in.next();
      stage = SaveGoal;
    } else if (stage <= SaveGoal && in.at_keyword("reconfig_latency_s")) {
      in.next();
      const SourceLocation at = in.peek().where;
      cfg.reconfig_latency_s = in.expect_number("latency in seconds");
      if (cfg.reconfig_latency_s < 0.0) throw ParseError(at, "negative latency", "number >= 0");
      stage = Latency;
    } else {
      switch (stage) {
        case Configurations:
          in.fail("'configuration', 'kill_components', 'save_goal' or 'reconfig_latency_s'");
        case Kill: in.fail("'save_goal' or 'reconfig_latency_s'");
        case SaveGoal: in.fail("'reconfig_latency_s'");
        default: in.fail("end of input");
      }
    }
    in.expect_end_of_line();
  }
  return cfg;
}

std::string serialize_metacontrol_config(const MetacontrolConfig& cfg) {
  auto list = [](const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + quote(items[i]);
    return s;
  };
  std::string out;
  for (const auto& c : cfg.configurations) {
    out += "configuration " + c.fd_id + " {\n";
    for (const auto& [name, value] : c.params) out += "  param " + name + " = " + format_number(value) + "\n";
    if (!c.restart_components.empty()) out += "  restart " + list(c.restart_components) + "\n";
    out += "}\n";
  }
  if (!cfg.kill_components.empty()) out += "kill_components " + list(cfg.kill_components) + "\n";
  out += std::string("save_goal ") + (cfg.save_goal ? "true" : "false") + "\n";
  out += "reconfig_latency_s " + format_number(cfg.reconfig_latency_s) + "\n";
  return out;
}

void validate_config(const MetacontrolConfig& config, const kb::KnowledgeBase& kb,
                     std::span<const std::string_view> param_schema,
                     std::span<const std::string_view> components) {
  auto known = [](std::span<const std::string_view> set, std::string_view name) {
    return std::find(set.begin(), set.end(), name) != set.end();
  };
  for (const auto& [id, fd] : kb.designs()) {
    if (!config.find(fd.config_ref))
      throw ConfigError(ConfigErrorKind::MissingMapping, id,
                        "no configuration '" + fd.config_ref + "' for design '" + id + "'");
  }
  bool any_restart = false;
  for (const auto& c : config.configurations) {
    for (const auto& [name, value] : c.params)
      if (!known(param_schema, name))
        throw ConfigError(ConfigErrorKind::UnknownParameter, name,
                          "configuration '" + c.fd_id + "' sets unknown parameter '" + name + "'");
    for (const auto& comp : c.restart_components)
      if (!known(components, comp))
        throw ConfigError(ConfigErrorKind::UnknownComponent, comp, "unknown component '" + comp + "'");
    any_restart = any_restart || !c.restart_components.empty();
  }
  for (const auto& comp : config.kill_components)
    if (!known(components, comp))
      throw ConfigError(ConfigErrorKind::UnknownComponent, comp, "unknown component '" + comp + "'");
  if (any_restart && config.kill_components.empty())
    throw ConfigError(ConfigErrorKind::EmptyKillList, {}, "configurations restart components but kill_components is empty");
}

}  // namespace mros::dsl
