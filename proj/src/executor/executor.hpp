#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsl/config.hpp"
#include "kb/knowledge_base.hpp"
#include "reasoner/reasoner.hpp"

namespace mros::exec {

struct Goal {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Goal&) const = default;
};

using ParamSet = std::vector<std::pair<std::string, double>>;

/// A component refused to stop/start or a parameter set was rejected.
class ApplyFailure : public std::runtime_error {
 public:
  ApplyFailure(std::string component, const std::string& what)
      : std::runtime_error(what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

/// What the Execute step needs from the system under adaptation.
class ManagedSystem {
 public:
  virtual ~ManagedSystem() = default;

  virtual double time() const = 0;

  virtual std::optional<Goal> active_goal() const = 0;
  virtual void cancel_goal() = 0;
  virtual void set_goal(const Goal& goal) = 0;

  virtual bool has_component(std::string_view name) const = 0;
  virtual bool accepts_parameter(std::string_view name) const = 0;
  virtual void stop_component(std::string_view name) = 0;
  virtual void start_component(std::string_view name) = 0;

  virtual ParamSet parameters() const = 0;
  /// All-or-nothing; throws ApplyFailure and keeps the old set on rejection.
  virtual void apply_parameters(const ParamSet& params) = 0;

  /// Brakes to a stop and holds for `duration_s` of mission time.
  virtual void hold(double duration_s) = 0;
};

enum class Outcome { Applied, SkippedSameFd, Failed };
std::string_view to_string(Outcome o);

struct SavedGoal {
  Goal goal;
  double saved_at = 0.0;
};

struct ReconfigurationReport {
  reasoner::AdaptationRequest request;
  double started_at = 0.0;
  double completed_at = 0.0;
  Outcome outcome = Outcome::Applied;
  bool goal_reissued = false;
  std::optional<SavedGoal> saved_goal;
  std::optional<Goal> goal_after;
  std::string failure;  // ApplyFailure message when outcome is Failed
};

/// Applies adaptation requests: stop, hold, re-parameterize, restart,
/// restore the goal and re-ground the objective. Tracks which design is
/// currently applied.
class Executor {
 public:
  explicit Executor(dsl::MetacontrolConfig config);

  /// Throws dsl::ConfigError(MissingMapping) when the target design has no
  /// configuration. ApplyFailure is reported as outcome Failed, with the
  /// target blacklisted and the previous parameters restored.
  ReconfigurationReport execute(const reasoner::AdaptationRequest& request, kb::KnowledgeBase& kb,
                                ManagedSystem& system);

  /// Configures the system for `fd_id` at mission start: parameters and
  /// grounding only, no component cycling and no latency.
  void apply_initial(std::string_view objective_id, std::string_view fd_id, kb::KnowledgeBase& kb,
                     ManagedSystem& system);

  const std::optional<std::string>& current_fd() const { return current_fd_; }
  const dsl::MetacontrolConfig& config() const { return config_; }

 private:
  const dsl::ConfigurationSpec& spec_for(const kb::KnowledgeBase& kb, std::string_view fd_id) const;

  dsl::MetacontrolConfig config_;
  std::optional<std::string> current_fd_;
};

/// `t=<s> fd=<id> outcome=<enum> latency=<s> goal_reissued=<bool>`
std::string format_reconfiguration(const ReconfigurationReport& report);

}  // namespace mros::exec
