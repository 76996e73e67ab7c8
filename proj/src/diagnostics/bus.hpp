#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mros::diag {

inline constexpr std::string_view kPowerLoadTopic = "/power_load";
inline constexpr std::string_view kScanMinDistanceTopic = "/scan_min_distance";
inline constexpr std::string_view kDiagnosticsTopic = "/diagnostics";

enum class Level { Ok, Warn, Error };
std::string_view to_string(Level level);

/// Mirrors the ROS diagnostic message: an observer name, a level, a
/// human-readable message and ordered text key/value pairs.
struct DiagnosticStatus {
  Level level = Level::Ok;
  std::string name;
  std::string message;
  std::vector<std::pair<std::string, std::string>> values;

  /// Appends a pair; throws std::invalid_argument on a repeated key.
  void add(std::string key, std::string value);
  const std::string* find(std::string_view key) const;
  bool operator==(const DiagnosticStatus&) const = default;
};

struct Telemetry {
  double value = 0.0;
  bool operator==(const Telemetry&) const = default;
};

using Payload = std::variant<Telemetry, DiagnosticStatus>;
enum class PayloadKind { Telemetry, Diagnostic };

PayloadKind kind_of(const Payload& p);

struct Sample {
  Payload payload;
  double t = 0.0;
};

class KindMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-process topic bus. A topic's payload kind is fixed by its first
/// publish (or an explicit declare). Delivery is synchronous and in publish
/// order; the most recent sample is retained per topic and handed to late
/// subscribers on subscription.
class Bus {
 public:
  using Handler = std::function<void(const Sample&)>;
  using SubscriptionId = std::size_t;

  void declare(std::string_view topic, PayloadKind kind);
  void publish(std::string_view topic, Payload payload, double t);
  SubscriptionId subscribe(std::string_view topic, Handler handler);
  void unsubscribe(SubscriptionId id);

  const Sample* latest(std::string_view topic) const;
  std::optional<PayloadKind> kind(std::string_view topic) const;

 private:
  struct Topic {
    std::optional<PayloadKind> kind;
    std::optional<Sample> latest;
    std::vector<std::pair<SubscriptionId, Handler>> subscribers;
  };

  Topic& topic(std::string_view name);

  std::map<std::string, Topic, std::less<>> topics_;
  SubscriptionId next_id_ = 1;
};

/// Queues everything published on one topic until drained.
class Inbox {
 public:
  Inbox(Bus& bus, std::string_view topic);
  ~Inbox();
  Inbox(const Inbox&) = delete;
  Inbox& operator=(const Inbox&) = delete;

  std::vector<Sample> drain();
  bool empty() const { return queue_.empty(); }

 private:
  Bus& bus_;
  Bus::SubscriptionId id_;
  std::deque<Sample> queue_;
};

}  // namespace mros::diag
