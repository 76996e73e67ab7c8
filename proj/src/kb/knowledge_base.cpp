#include "kb/knowledge_base.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mros::kb {

namespace {

[[noreturn]] void fail(KbErrorKind kind, std::string_view subject, std::string_view what) {
  throw KbError(kind, std::string(subject), std::string(what) + " '" + std::string(subject) + "'");
}

void require_finite(double v, std::string_view subject) {
  if (!std::isfinite(v)) fail(KbErrorKind::InvalidValue, subject, "non-finite value for");
}

}  // namespace

std::string_view to_string(Polarity p) {
  return p == Polarity::HigherIsBetter ? "higher_is_better" : "lower_is_better";
}

std::string_view to_string(ObjectiveStatus s) {
  switch (s) {
    case ObjectiveStatus::Ok: return "OK";
    case ObjectiveStatus::InErrorNfr: return "IN_ERROR_NFR";
    case ObjectiveStatus::InErrorComponent: return "IN_ERROR_COMPONENT";
    case ObjectiveStatus::Ungrounded: return "UNGROUNDED";
  }
  return "?";
}

std::string_view to_string(ComponentStatus s) {
  switch (s) {
    case ComponentStatus::Ok: return "OK";
    case ComponentStatus::Warn: return "WARN";
    case ComponentStatus::Error: return "ERROR";
  }
  return "?";
}

std::optional<double> FunctionDesign::expected(std::string_view type_id) const {
  for (const auto& qa : expected_qas)
    if (qa.type_id == type_id) return qa.value;
  return std::nullopt;
}

bool satisfies(Polarity polarity, double value, double threshold) {
  return polarity == Polarity::HigherIsBetter ? value >= threshold : value <= threshold;
}

double margin(Polarity polarity, double value, double threshold) {
  return polarity == Polarity::HigherIsBetter ? value - threshold : threshold - value;
}

void KnowledgeBase::insert(QualityAttributeType qa) {
  if (qa_types_.contains(qa.id)) fail(KbErrorKind::DuplicateId, qa.id, "duplicate qa_type");
  auto id = qa.id;
  qa_types_.emplace(std::move(id), std::move(qa));
}

void KnowledgeBase::insert(Function fn) {
  if (functions_.contains(fn.id)) fail(KbErrorKind::DuplicateId, fn.id, "duplicate function");
  auto id = fn.id;
  functions_.emplace(std::move(id), std::move(fn));
}

void KnowledgeBase::insert(FunctionDesign fd) {
  if (designs_.contains(fd.id)) fail(KbErrorKind::DuplicateId, fd.id, "duplicate design");
  if (!functions_.contains(fd.solves)) fail(KbErrorKind::DanglingReference, fd.solves, "unknown function");
  std::set<std::string_view> seen;
  for (const auto& qa : fd.expected_qas) {
    if (!qa_types_.contains(qa.type_id)) fail(KbErrorKind::DanglingReference, qa.type_id, "unknown qa_type");
    if (!seen.insert(qa.type_id).second) fail(KbErrorKind::DuplicateId, qa.type_id, "repeated expected qa");
    require_finite(qa.value, qa.type_id);
  }
  fd.blacklisted = false;
  auto id = fd.id;
  designs_.emplace(std::move(id), std::move(fd));
}

void KnowledgeBase::insert(Objective obj) {
  if (find_objective(obj.id)) fail(KbErrorKind::DuplicateId, obj.id, "duplicate objective");
  if (!functions_.contains(obj.of_function))
    fail(KbErrorKind::DanglingReference, obj.of_function, "unknown function");
  std::set<std::string_view> seen;
  for (const auto& nfr : obj.nfrs) {
    if (!qa_types_.contains(nfr.type_id)) fail(KbErrorKind::DanglingReference, nfr.type_id, "unknown qa_type");
    if (!seen.insert(nfr.type_id).second) fail(KbErrorKind::DuplicateId, nfr.type_id, "repeated requirement");
    require_finite(nfr.threshold, nfr.type_id);
  }
  obj.status = ObjectiveStatus::Ungrounded;
  objectives_.push_back(std::move(obj));
}

void KnowledgeBase::override_expected_qas(std::string_view fd_id, std::span<const QAValue> overrides) {
  auto it = designs_.find(fd_id);
  if (it == designs_.end()) fail(KbErrorKind::UnknownDesign, fd_id, "unknown design");
  // Validate everything before touching the design.
  for (const auto& qa : overrides) {
    if (!qa_types_.contains(qa.type_id)) fail(KbErrorKind::UnknownQAType, qa.type_id, "unknown qa_type");
    require_finite(qa.value, qa.type_id);
  }
  auto& expected = it->second.expected_qas;
  for (const auto& qa : overrides) {
    auto slot = std::find_if(expected.begin(), expected.end(),
                             [&](const QAValue& e) { return e.type_id == qa.type_id; });
    if (slot != expected.end())
      slot->value = qa.value;
    else
      expected.push_back(qa);
  }
}

void KnowledgeBase::update_measurement(std::string_view objective_id, std::string_view type_id,
                                       double value, double t) {
  if (!qa_types_.contains(type_id)) fail(KbErrorKind::UnknownQAType, type_id, "unknown qa_type");
  require_finite(value, type_id);
  auto& g = grounding_mut(objective_id);
  g.measured_qas.insert_or_assign(std::string(type_id), Measurement{value, t});
}

void KnowledgeBase::set_component_status(std::string_view objective_id, std::string_view component,
                                         ComponentStatus status) {
  auto& g = grounding_mut(objective_id);
  g.component_status.insert_or_assign(std::string(component), status);
}

std::vector<std::string> KnowledgeBase::feasible_designs(std::string_view objective_id) const {
  const auto& obj = objective(objective_id);
  std::vector<std::string> out;
  for (const auto& [id, fd] : designs_) {
    if (fd.solves != obj.of_function || fd.blacklisted) continue;
    bool ok = std::all_of(obj.nfrs.begin(), obj.nfrs.end(), [&](const Requirement& nfr) {
      auto expected = fd.expected(nfr.type_id);
      return expected && satisfies(qa_types_.find(nfr.type_id)->second.polarity, *expected, nfr.threshold);
    });
    if (ok) out.push_back(id);
  }
  return out;
}

void KnowledgeBase::ground(std::string_view objective_id, std::string_view fd_id) {
  auto& obj = objective_mut(objective_id);
  const auto& fd = design(fd_id);
  if (fd.solves != obj.of_function)
    fail(KbErrorKind::DanglingReference, fd_id, "design does not solve the objective's function:");
  FunctionGrounding g;
  g.objective_id = obj.id;
  g.fd_id = fd.id;
  groundings_.insert_or_assign(obj.id, std::move(g));
  obj.status = ObjectiveStatus::Ok;
}

void KnowledgeBase::set_status(std::string_view objective_id, ObjectiveStatus status) {
  auto& obj = objective_mut(objective_id);
  if (status == ObjectiveStatus::Ungrounded) {
    groundings_.erase(obj.id);
  } else if (!groundings_.contains(obj.id)) {
    fail(KbErrorKind::UngroundedObjective, objective_id, "objective is not grounded:");
  }
  obj.status = status;
}

void KnowledgeBase::blacklist(std::string_view fd_id) {
  auto it = designs_.find(fd_id);
  if (it == designs_.end()) fail(KbErrorKind::UnknownDesign, fd_id, "unknown design");
  it->second.blacklisted = true;
}

const QualityAttributeType* KnowledgeBase::find_qa_type(std::string_view id) const {
  auto it = qa_types_.find(id);
  return it == qa_types_.end() ? nullptr : &it->second;
}

const Function* KnowledgeBase::find_function(std::string_view id) const {
  auto it = functions_.find(id);
  return it == functions_.end() ? nullptr : &it->second;
}

const FunctionDesign* KnowledgeBase::find_design(std::string_view id) const {
  auto it = designs_.find(id);
  return it == designs_.end() ? nullptr : &it->second;
}

const Objective* KnowledgeBase::find_objective(std::string_view id) const {
  auto it = std::find_if(objectives_.begin(), objectives_.end(),
                         [&](const Objective& o) { return o.id == id; });
  return it == objectives_.end() ? nullptr : &*it;
}

const FunctionGrounding* KnowledgeBase::find_grounding(std::string_view objective_id) const {
  auto it = groundings_.find(objective_id);
  return it == groundings_.end() ? nullptr : &it->second;
}

const QualityAttributeType& KnowledgeBase::qa_type(std::string_view id) const {
  if (auto* qa = find_qa_type(id)) return *qa;
  fail(KbErrorKind::UnknownQAType, id, "unknown qa_type");
}

const FunctionDesign& KnowledgeBase::design(std::string_view id) const {
  if (auto* fd = find_design(id)) return *fd;
  fail(KbErrorKind::UnknownDesign, id, "unknown design");
}

const Objective& KnowledgeBase::objective(std::string_view id) const {
  if (auto* o = find_objective(id)) return *o;
  fail(KbErrorKind::UnknownObjective, id, "unknown objective");
}

std::size_t KnowledgeBase::designs_solving(std::string_view function_id) const {
  return static_cast<std::size_t>(std::count_if(designs_.begin(), designs_.end(),
                                                [&](const auto& kv) { return kv.second.solves == function_id; }));
}

Objective& KnowledgeBase::objective_mut(std::string_view id) {
  auto it = std::find_if(objectives_.begin(), objectives_.end(),
                         [&](const Objective& o) { return o.id == id; });
  if (it == objectives_.end()) fail(KbErrorKind::UnknownObjective, id, "unknown objective");
  return *it;
}

FunctionGrounding& KnowledgeBase::grounding_mut(std::string_view objective_id) {
  objective_mut(objective_id);
  auto it = groundings_.find(objective_id);
  if (it == groundings_.end())
    fail(KbErrorKind::UngroundedObjective, objective_id, "objective is not grounded:");
  return it->second;
}

}  // namespace mros::kb
