#include "executor/executor.hpp"

#include "diagnostics/observer.hpp"

namespace mros::exec {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Applied: return "APPLIED";
    case Outcome::SkippedSameFd: return "SKIPPED_SAME_FD";
    case Outcome::Failed: return "FAILED";
  }
  return "?";
}

Executor::Executor(dsl::MetacontrolConfig config) : config_(std::move(config)) {}

const dsl::ConfigurationSpec& Executor::spec_for(const kb::KnowledgeBase& kb, std::string_view fd_id) const {
  const auto* fd = kb.find_design(fd_id);
  const auto* spec = fd ? config_.find(fd->config_ref) : nullptr;
  if (!spec)
    throw dsl::ConfigError(dsl::ConfigErrorKind::MissingMapping, std::string(fd_id),
                           "no configuration for design '" + std::string(fd_id) + "'");
  return *spec;
}

void Executor::apply_initial(std::string_view objective_id, std::string_view fd_id, kb::KnowledgeBase& kb,
                             ManagedSystem& system) {
  const auto& spec = spec_for(kb, fd_id);
  system.apply_parameters(spec.params);
  kb.ground(objective_id, fd_id);
  current_fd_ = std::string(fd_id);
}

ReconfigurationReport Executor::execute(const reasoner::AdaptationRequest& request, kb::KnowledgeBase& kb,
                                        ManagedSystem& system) {
  const auto& spec = spec_for(kb, request.to_fd);

  ReconfigurationReport report;
  report.request = request;
  report.started_at = system.time();
  report.completed_at = report.started_at;

  if (current_fd_ && *current_fd_ == request.to_fd) {
    report.outcome = Outcome::SkippedSameFd;
    report.goal_after = system.active_goal();
    return report;
  }

  auto fail = [&](const ApplyFailure& e) {
    kb.blacklist(request.to_fd);
    report.outcome = Outcome::Failed;
    report.failure = e.what();
    report.goal_after = system.active_goal();
    return report;
  };

  // Reject what cannot work before anything is stopped.
  for (const auto& [name, value] : spec.params)
    if (!system.accepts_parameter(name))
      return fail(ApplyFailure(name, "parameter '" + name + "' not accepted by the managed system"));
  for (const auto& c : spec.restart_components)
    if (!system.has_component(c)) return fail(ApplyFailure(c, "unknown component '" + c + "'"));
  for (const auto& c : config_.kill_components)
    if (!system.has_component(c)) return fail(ApplyFailure(c, "unknown component '" + c + "'"));

  if (config_.save_goal) {
    if (auto goal = system.active_goal()) report.saved_goal = SavedGoal{*goal, report.started_at};
  }
  const ParamSet previous = system.parameters();

  // A killed navigation component drops whatever goal it was pursuing.
  for (const auto& c : config_.kill_components) system.stop_component(c);
  if (!config_.kill_components.empty()) system.cancel_goal();
  system.hold(config_.reconfig_latency_s);

  try {
    system.apply_parameters(spec.params);
    for (const auto& c : spec.restart_components) system.start_component(c);
  } catch (const ApplyFailure& e) {
    // Back to the previous configuration, components running again.
    system.apply_parameters(previous);
    for (const auto& c : config_.kill_components) system.start_component(c);
    if (report.saved_goal) system.set_goal(report.saved_goal->goal);
    report.completed_at = report.started_at + config_.reconfig_latency_s;
    report.goal_reissued = report.saved_goal.has_value();
    return fail(e);
  }

  if (report.saved_goal) {
    system.set_goal(report.saved_goal->goal);
    report.goal_reissued = true;
  }
  kb.ground(request.objective_id, request.to_fd);
  current_fd_ = request.to_fd;

  report.outcome = Outcome::Applied;
  report.completed_at = report.started_at + config_.reconfig_latency_s;
  report.goal_after = system.active_goal();
  return report;
}

std::string format_reconfiguration(const ReconfigurationReport& r) {
  return "t=" + diag::render_real(r.started_at) + " fd=" + r.request.to_fd + " outcome=" +
         std::string(to_string(r.outcome)) + " latency=" + diag::render_real(r.completed_at - r.started_at) +
         " goal_reissued=" + (r.goal_reissued ? "true" : "false");
}

}  // namespace mros::exec
