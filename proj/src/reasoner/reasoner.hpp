#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostics/bus.hpp"
#include "kb/knowledge_base.hpp"

namespace mros::reasoner {

enum class Reason { NfrViolation, ComponentError, InitialGrounding };
std::string_view to_string(Reason r);

struct AdaptationRequest {
  std::string objective_id;
  std::optional<std::string> from_fd;
  std::string to_fd;
  Reason reason = Reason::NfrViolation;
  double utility = 0.0;

  bool operator==(const AdaptationRequest&) const = default;
};

struct ReasonerConfig {
  /// Measurements older than this are ignored by the NFR rule.
  double staleness_s = 2.0;
};

struct StatusChange {
  std::string objective_id;
  kb::ObjectiveStatus status;
  bool operator==(const StatusChange&) const = default;
};

/// No design is left for the objective. Not fatal: the caller keeps the
/// current configuration and records the event.
class NoFeasibleDesign : public std::runtime_error {
 public:
  explicit NoFeasibleDesign(std::string objective_id)
      : std::runtime_error("no feasible design for objective '" + objective_id + "'"),
        objective_id_(std::move(objective_id)) {}
  const std::string& objective_id() const noexcept { return objective_id_; }

 private:
  std::string objective_id_;
};

/// Recomputes the status of every grounded objective:
///   R2  a component in ERROR  -> IN_ERROR_COMPONENT, grounded design blacklisted
///   R1  a fresh measurement violating an NFR -> IN_ERROR_NFR
///   otherwise OK.
/// Returns only the objectives whose status changed.
std::vector<StatusChange> analyze(kb::KnowledgeBase& kb, double now, const ReasonerConfig& cfg);

/// Sum over the objective's NFRs of the polarity-aware margin of the
/// design's expected value. The design must carry every NFR type.
double utility(const kb::KnowledgeBase& kb, const kb::Objective& objective, const kb::FunctionDesign& fd);

/// Picks the feasible design with the highest utility, lowest id on ties.
/// The currently grounded design is not a candidate when replanning after an
/// error. Throws NoFeasibleDesign.
AdaptationRequest plan(const kb::KnowledgeBase& kb, std::string_view objective_id);

struct StepOutcome {
  std::optional<AdaptationRequest> request;
  std::vector<StatusChange> changes;
  /// Set when planning failed for lack of a feasible design.
  std::optional<std::string> no_feasible_objective;
};

/// One Monitor-Analyze-Plan pass: ingests a batch of /diagnostics samples,
/// runs analyze, then plans for the first objective (declaration order) that
/// is not OK. At most one request per step.
StepOutcome mape_step(kb::KnowledgeBase& kb, std::span<const diag::Sample> batch, double now,
                      const ReasonerConfig& cfg);

/// `t=<s> objective=<id> reason=<enum> from=<id> to=<id> utility=<real>`
std::string format_decision(const AdaptationRequest& request, double t);

}  // namespace mros::reasoner
