#include "reasoner/reasoner.hpp"

#include <algorithm>

#include "diagnostics/observer.hpp"

namespace mros::reasoner {

using kb::ObjectiveStatus;

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::NfrViolation: return "NFR_VIOLATION";
    case Reason::ComponentError: return "COMPONENT_ERROR";
    case Reason::InitialGrounding: return "INITIAL_GROUNDING";
  }
  return "?";
}

std::vector<StatusChange> analyze(kb::KnowledgeBase& kb, double now, const ReasonerConfig& cfg) {
  std::vector<StatusChange> changes;
  // Copy ids first: blacklisting and status writes go through the KB.
  std::vector<std::string> ids;
  for (const auto& o : kb.objectives()) ids.push_back(o.id);

  for (const auto& id : ids) {
    const auto& obj = kb.objective(id);
    const auto* g = kb.find_grounding(id);
    if (!g) continue;

    ObjectiveStatus next = ObjectiveStatus::Ok;
    const bool component_error = std::any_of(g->component_status.begin(), g->component_status.end(),
                                             [](const auto& kv) { return kv.second == kb::ComponentStatus::Error; });
    if (component_error) {
      next = ObjectiveStatus::InErrorComponent;
      kb.blacklist(g->fd_id);
    } else {
      for (const auto& nfr : obj.nfrs) {
        auto m = g->measured_qas.find(nfr.type_id);
        if (m == g->measured_qas.end() || now - m->second.t > cfg.staleness_s) continue;
        if (!kb::satisfies(kb.qa_type(nfr.type_id).polarity, m->second.value, nfr.threshold)) {
          next = ObjectiveStatus::InErrorNfr;
          break;
        }
      }
    }
    if (next != obj.status) {
      kb.set_status(id, next);
      changes.push_back({id, next});
    }
  }
  return changes;
}

double utility(const kb::KnowledgeBase& kb, const kb::Objective& objective, const kb::FunctionDesign& fd) {
  double u = 0.0;
  for (const auto& nfr : objective.nfrs) {
    auto expected = fd.expected(nfr.type_id);
    if (!expected) throw std::invalid_argument("design '" + fd.id + "' has no expected " + nfr.type_id);
    u += kb::margin(kb.qa_type(nfr.type_id).polarity, *expected, nfr.threshold);
  }
  return u;
}

AdaptationRequest plan(const kb::KnowledgeBase& kb, std::string_view objective_id) {
  const auto& obj = kb.objective(objective_id);
  AdaptationRequest req;
  req.objective_id = obj.id;
  switch (obj.status) {
    case ObjectiveStatus::InErrorNfr: req.reason = Reason::NfrViolation; break;
    case ObjectiveStatus::InErrorComponent: req.reason = Reason::ComponentError; break;
    case ObjectiveStatus::Ungrounded: req.reason = Reason::InitialGrounding; break;
    case ObjectiveStatus::Ok:
      throw std::logic_error("plan called for objective '" + obj.id + "' which is OK");
  }
  if (const auto* g = kb.find_grounding(obj.id)) req.from_fd = g->fd_id;

  std::optional<std::string> best;
  double best_u = 0.0;
  for (const auto& id : kb.feasible_designs(obj.id)) {  // ascending id
    if (req.reason != Reason::InitialGrounding && req.from_fd && id == *req.from_fd) continue;
    const double u = utility(kb, obj, kb.design(id));
    if (!best || u > best_u) {
      best = id;
      best_u = u;
    }
  }
  if (!best) throw NoFeasibleDesign(obj.id);
  req.to_fd = *best;
  req.utility = best_u;
  return req;
}

StepOutcome mape_step(kb::KnowledgeBase& kb, std::span<const diag::Sample> batch, double now,
                      const ReasonerConfig& cfg) {
  StepOutcome out;

  std::vector<std::string> grounded;
  for (const auto& o : kb.objectives())
    if (kb.find_grounding(o.id)) grounded.push_back(o.id);

  for (const auto& sample : batch) {
    const auto* st = std::get_if<diag::DiagnosticStatus>(&sample.payload);
    if (!st) continue;
    for (const auto& [key, text] : st->values) {
      if (kb.find_qa_type(key)) {
        if (auto v = diag::parse_real(text))
          for (const auto& id : grounded) kb.update_measurement(id, key, *v, sample.t);
      } else if (key == "component") {
        const auto status = st->level == diag::Level::Error  ? kb::ComponentStatus::Error
                            : st->level == diag::Level::Warn ? kb::ComponentStatus::Warn
                                                             : kb::ComponentStatus::Ok;
        for (const auto& id : grounded) kb.set_component_status(id, text, status);
      }
    }
  }

  out.changes = analyze(kb, now, cfg);

  for (const auto& o : kb.objectives()) {
    if (o.status == ObjectiveStatus::Ok) continue;
    try {
      out.request = plan(kb, o.id);
    } catch (const NoFeasibleDesign& e) {
      out.no_feasible_objective = e.objective_id();
    }
    break;
  }
  return out;
}

std::string format_decision(const AdaptationRequest& r, double t) {
  return "t=" + diag::render_real(t) + " objective=" + r.objective_id + " reason=" + std::string(to_string(r.reason)) +
         " from=" + r.from_fd.value_or("none") + " to=" + r.to_fd + " utility=" + diag::render_real(r.utility);
}

}  // namespace mros::reasoner
