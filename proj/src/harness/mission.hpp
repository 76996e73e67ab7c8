#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsl/config.hpp"
#include "dsl/model.hpp"
#include "executor/executor.hpp"
#include "navsim/simulator.hpp"
#include "reasoner/reasoner.hpp"

namespace mros::harness {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownMode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownStaticFd : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `adaptive` or `static:<fd_id>`.
struct Mode {
  bool adaptive = true;
  std::string static_fd;

  static Mode parse(std::string_view text);
  static Mode make_static(std::string fd) { return {false, std::move(fd)}; }
  std::string label() const;
};

/// A parsed model and metacontrol configuration, cross-validated.
struct LoadedModel {
  dsl::ModelDocument document;
  dsl::MetacontrolConfig config;
};

/// Throws dsl::ParseError, dsl::SemanticError or dsl::ConfigError.
LoadedModel load_model(std::string_view model_text, std::string_view config_text);
/// Reads both files, then as load_model. Throws IoError.
LoadedModel load_model_files(const std::filesystem::path& model, const std::filesystem::path& config);
std::string read_file(const std::filesystem::path& path);

struct FaultInjection {
  std::string component;
  double at = 0.0;
};

struct Scenario {
  nav::MissionSpec spec;
  /// Design applied at t=0 in adaptive mode. Without one the reasoner
  /// performs the initial grounding.
  std::optional<std::string> initial_fd;
  std::optional<FaultInjection> fault;
  reasoner::ReasonerConfig reasoner;
};

struct MissionMetrics {
  std::uint64_t seed = 0;
  std::string mode;
  double safety_violation_frac = 0.0;
  double energy_violation_frac = 0.0;
  bool success = false;
  nav::MissionStatus status = nav::MissionStatus::Running;
  int adaptations = 0;
  int no_feasible_events = 0;
  double mission_time_s = 0.0;
};

struct MissionResult {
  MissionMetrics metrics;
  std::string trace_csv;
  std::string diagnostics_csv;
  std::string decisions_log;
  std::string reconfigurations_log;
  std::vector<reasoner::AdaptationRequest> decisions;
  std::vector<exec::ReconfigurationReport> reconfigurations;
};

/// Runs one mission to completion: simulator step, observer ticks, then in
/// adaptive mode one MAPE step and at most one reconfiguration.
/// Throws UnknownStaticFd when a named design is not in the model.
MissionResult run_mission(const LoadedModel& model, const Mode& mode, const Scenario& scenario);

inline constexpr std::string_view kTraceFile = "trace.csv";
inline constexpr std::string_view kDiagnosticsFile = "diagnostics.csv";
inline constexpr std::string_view kDecisionsFile = "decisions.log";
inline constexpr std::string_view kReconfigurationsFile = "reconfigurations.log";
inline constexpr std::string_view kMetricsFile = "metrics.csv";
inline constexpr std::string_view kCompareFile = "compare.csv";

void write_mission_outputs(const MissionResult& result, const std::filesystem::path& dir);

std::string metrics_header();
std::string metrics_row(const MissionMetrics& m);

struct ModeSummary {
  std::string mode;
  double safety_violation_frac = 0.0;
  double energy_violation_frac = 0.0;
  double success_rate = 0.0;
  double adaptations = 0.0;
  double no_feasible_events = 0.0;
};

struct Comparison {
  std::vector<MissionMetrics> adaptive;  // seed order
  std::vector<MissionMetrics> fixed;     // seed order
  ModeSummary adaptive_mean;
  ModeSummary static_mean;
  std::string csv;
  std::string verdict;
};

/// Paired adaptive/static runs over `seeds` on otherwise identical
/// scenarios. The adaptive runs start from `static_fd` unless the scenario
/// names another initial design. Needs at least two seeds. `jobs` = 0 uses
/// the hardware concurrency.
Comparison compare(const LoadedModel& model, std::span<const std::uint64_t> seeds, const std::string& static_fd,
                   const Scenario& scenario, unsigned jobs = 0);

/// One seed per non-empty line; `#` comments allowed.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace mros::harness
