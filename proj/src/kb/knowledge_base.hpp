#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mros::kb {

enum class Polarity { HigherIsBetter, LowerIsBetter };
enum class ObjectiveStatus { Ok, InErrorNfr, InErrorComponent, Ungrounded };
enum class ComponentStatus { Ok, Warn, Error };

std::string_view to_string(Polarity p);
std::string_view to_string(ObjectiveStatus s);
std::string_view to_string(ComponentStatus s);

struct QualityAttributeType {
  std::string id;
  Polarity polarity = Polarity::HigherIsBetter;
  std::string description;
};

struct QAValue {
  std::string type_id;
  double value = 0.0;

  bool operator==(const QAValue&) const = default;
};

struct Function {
  std::string id;
  std::string description;
};

/// An architectural variant of a Function, with the quality it is expected
/// to deliver and the name of the configuration that realizes it.
struct FunctionDesign {
  std::string id;
  std::string solves;
  std::vector<QAValue> expected_qas;
  std::string config_ref;
  bool blacklisted = false;

  std::optional<double> expected(std::string_view type_id) const;
};

struct Requirement {
  std::string type_id;
  double threshold = 0.0;

  bool operator==(const Requirement&) const = default;
};

struct Objective {
  std::string id;
  std::string of_function;
  std::vector<Requirement> nfrs;
  ObjectiveStatus status = ObjectiveStatus::Ungrounded;
};

struct Measurement {
  double value = 0.0;
  double t = 0.0;
};

struct FunctionGrounding {
  std::string objective_id;
  std::string fd_id;
  std::map<std::string, Measurement, std::less<>> measured_qas;
  std::map<std::string, ComponentStatus, std::less<>> component_status;
};

enum class KbErrorKind {
  DuplicateId,
  DanglingReference,
  UnknownDesign,
  UnknownQAType,
  UnknownObjective,
  UngroundedObjective,
  InvalidValue,
};

class KbError : public std::runtime_error {
 public:
  KbError(KbErrorKind kind, std::string subject, const std::string& what)
      : std::runtime_error(what), kind_(kind), subject_(std::move(subject)) {}

  KbErrorKind kind() const noexcept { return kind_; }
  /// The id that triggered the error (the missing id for DanglingReference).
  const std::string& subject() const noexcept { return subject_; }

 private:
  KbErrorKind kind_;
  std::string subject_;
};

/// True when `value` meets `threshold` in the direction given by `polarity`.
bool satisfies(Polarity polarity, double value, double threshold);

/// Polarity-aware distance to the threshold; positive when satisfied.
double margin(Polarity polarity, double value, double threshold);

/// Typed store of the design-time model plus the runtime objective state.
/// Every mutation keeps referential integrity; a failed call leaves the
/// store unchanged.
class KnowledgeBase {
 public:
  void insert(QualityAttributeType qa);
  void insert(Function fn);
  void insert(FunctionDesign fd);
  void insert(Objective obj);

  void override_expected_qas(std::string_view fd_id, std::span<const QAValue> overrides);
  void update_measurement(std::string_view objective_id, std::string_view type_id, double value,
                          double t);
  void set_component_status(std::string_view objective_id, std::string_view component,
                            ComponentStatus status);

  /// Designs that solve the objective's function, are not blacklisted and
  /// meet every NFR on their expected values. Sorted by id.
  std::vector<std::string> feasible_designs(std::string_view objective_id) const;

  /// Binds the objective to `fd_id` with a fresh grounding and status OK.
  void ground(std::string_view objective_id, std::string_view fd_id);
  void set_status(std::string_view objective_id, ObjectiveStatus status);
  void blacklist(std::string_view fd_id);

  const QualityAttributeType* find_qa_type(std::string_view id) const;
  const Function* find_function(std::string_view id) const;
  const FunctionDesign* find_design(std::string_view id) const;
  const Objective* find_objective(std::string_view id) const;
  const FunctionGrounding* find_grounding(std::string_view objective_id) const;

  const QualityAttributeType& qa_type(std::string_view id) const;
  const FunctionDesign& design(std::string_view id) const;
  const Objective& objective(std::string_view id) const;

  const std::map<std::string, QualityAttributeType, std::less<>>& qa_types() const { return qa_types_; }
  const std::map<std::string, Function, std::less<>>& functions() const { return functions_; }
  const std::map<std::string, FunctionDesign, std::less<>>& designs() const { return designs_; }
  /// Objectives in insertion order; earlier objectives have higher priority.
  const std::vector<Objective>& objectives() const { return objectives_; }

  std::size_t designs_solving(std::string_view function_id) const;

 private:
  Objective& objective_mut(std::string_view id);
  FunctionGrounding& grounding_mut(std::string_view objective_id);

  std::map<std::string, QualityAttributeType, std::less<>> qa_types_;
  std::map<std::string, Function, std::less<>> functions_;
  std::map<std::string, FunctionDesign, std::less<>> designs_;
  std::vector<Objective> objectives_;
  std::map<std::string, FunctionGrounding, std::less<>> groundings_;
};

}  // namespace mros::kb
