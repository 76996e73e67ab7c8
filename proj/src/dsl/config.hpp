#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsl/errors.hpp"
#include "kb/knowledge_base.hpp"

namespace mros::dsl {

/// How one function design is realized on the managed system.
struct ConfigurationSpec {
  std::string fd_id;
  std::vector<std::pair<std::string, double>> params;  // unique names, file order
  std::vector<std::string> restart_components;

  const double* param(std::string_view name) const;
  bool operator==(const ConfigurationSpec&) const = default;
};

struct MetacontrolConfig {
  std::vector<ConfigurationSpec> configurations;  // unique fd_id, file order
  std::vector<std::string> kill_components;
  bool save_goal = true;
  double reconfig_latency_s = 1.0;

  const ConfigurationSpec* find(std::string_view fd_id) const;
  bool operator==(const MetacontrolConfig&) const = default;
};

/// Throws ParseError.
MetacontrolConfig parse_metacontrol_config(std::string_view source);

std::string serialize_metacontrol_config(const MetacontrolConfig& config);

enum class ConfigErrorKind { MissingMapping, UnknownParameter, UnknownComponent, EmptyKillList };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, std::string subject, const std::string& what)
      : std::runtime_error(what), kind_(kind), subject_(std::move(subject)) {}
  ConfigErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ConfigErrorKind kind_;
  std::string subject_;
};

/// Cross-checks a configuration against a loaded model and the managed
/// system's parameter and component schema:
///  - every design's config reference has a configuration (MissingMapping),
///  - every param name is in `param_schema` (UnknownParameter),
///  - every restarted or killed component is in `components` (UnknownComponent),
///  - kill_components is non-empty if anything restarts (EmptyKillList).
void validate_config(const MetacontrolConfig& config, const kb::KnowledgeBase& kb,
                     std::span<const std::string_view> param_schema,
                     std::span<const std::string_view> components);

}  // namespace mros::dsl
