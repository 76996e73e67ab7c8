#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostics/bus.hpp"

namespace mros::diag {

// Normalization constants of the energy observer.
inline constexpr double kIdleLoad = 0.2;
inline constexpr double kPeakLoad = 5.0;
// Distances (m) at which the safety QA reaches 0 and 1.
inline constexpr double kCriticalDistance = 0.5;
inline constexpr double kSafeDistance = 2.0;

/// Normalized power load, clamped to [0, 1].
double energy_attr(double power_load);
/// Normalized obstacle clearance, clamped to [0, 1].
double safety_attr(double min_obstacle_distance);

/// Shortest decimal rendering that parses back to the same double.
std::string render_real(double value);
std::optional<double> parse_real(std::string_view text);

/// Periodic observer over the latest samples of a fixed set of topics.
/// Emits at most once per period and only once every input has a sample;
/// each emission is also published on /diagnostics.
class TopicObserver {
 public:
  using Compute = std::function<DiagnosticStatus(std::span<const Sample>)>;

  TopicObserver(std::string id, double period_s, std::vector<std::string> input_topics, Compute compute);

  /// `now` must be non-decreasing across calls.
  std::optional<DiagnosticStatus> tick(Bus& bus, double now);

  const std::string& id() const { return id_; }
  double period() const { return period_s_; }
  const std::vector<std::string>& inputs() const { return inputs_; }

 private:
  std::string id_;
  double period_s_;
  std::vector<std::string> inputs_;
  Compute compute_;
  std::optional<double> last_emission_;
};

/// Publishes ("energy", energy_attr(latest /power_load)).
TopicObserver make_energy_observer(std::string id = "energy_observer", double period_s = 0.1);
/// Publishes ("safety", safety_attr(latest /scan_min_distance)).
TopicObserver make_safety_observer(std::string id = "safety_observer", double period_s = 0.1);

/// Records every /diagnostics message as flat rows for CSV export.
class DiagnosticsRecorder {
 public:
  struct Row {
    double t;
    std::string observer;
    Level level;
    std::string key;
    std::string value;
  };

  explicit DiagnosticsRecorder(Bus& bus);
  ~DiagnosticsRecorder();
  DiagnosticsRecorder(const DiagnosticsRecorder&) = delete;
  DiagnosticsRecorder& operator=(const DiagnosticsRecorder&) = delete;

  const std::vector<Row>& rows() const { return rows_; }
  /// Header `t,observer,level,key,value`, one row per key/value pair.
  std::string to_csv() const;

 private:
  Bus& bus_;
  Bus::SubscriptionId id_;
  std::vector<Row> rows_;
};

}  // namespace mros::diag
