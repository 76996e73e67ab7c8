#include "diagnostics/observer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "dsl/lexer.hpp"
#include "util/csv.hpp"

namespace mros::diag {

namespace {

// Emission times are multiples of a fixed step; absorb rounding in `now`.
constexpr double kTimeEps = 1e-9;

double telemetry_value(const Sample& s) { return std::get<Telemetry>(s.payload).value; }

DiagnosticStatus qa_status(const std::string& observer, const char* key, double attr) {
  DiagnosticStatus st;
  st.level = Level::Ok;
  st.name = observer;
  st.values.emplace_back(key, render_real(attr));
  st.message = "QA status";
  return st;
}

}  // namespace

double energy_attr(double power_load) {
  const double attr = (power_load - kIdleLoad) / (kPeakLoad - kIdleLoad);
  return std::clamp(attr, 0.0, 1.0);
}

double safety_attr(double d) {
  return std::clamp((d - kCriticalDistance) / (kSafeDistance - kCriticalDistance), 0.0, 1.0);
}

std::string render_real(double value) { return dsl::format_number(value); }

std::optional<double> parse_real(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

TopicObserver::TopicObserver(std::string id, double period_s, std::vector<std::string> input_topics,
                             Compute compute)
    : id_(std::move(id)), period_s_(period_s), inputs_(std::move(input_topics)), compute_(std::move(compute)) {
  if (id_.empty()) throw std::invalid_argument("observer id must be non-empty");
  if (!(period_s_ > 0.0)) throw std::invalid_argument("observer period must be positive");
}

std::optional<DiagnosticStatus> TopicObserver::tick(Bus& bus, double now) {
  if (last_emission_ && now < *last_emission_ + period_s_ - kTimeEps) return std::nullopt;
  std::vector<Sample> latest;
  latest.reserve(inputs_.size());
  for (const auto& topic : inputs_) {
    const Sample* s = bus.latest(topic);
    if (!s) return std::nullopt;
    latest.push_back(*s);
  }
  DiagnosticStatus status = compute_(latest);
  last_emission_ = now;
  bus.publish(kDiagnosticsTopic, status, now);
  return status;
}

TopicObserver make_energy_observer(std::string id, double period_s) {
  auto name = id;
  return TopicObserver(std::move(id), period_s, {std::string(kPowerLoadTopic)},
                       [name](std::span<const Sample> msgs) {
                         return qa_status(name, "energy", energy_attr(telemetry_value(msgs[0])));
                       });
}

TopicObserver make_safety_observer(std::string id, double period_s) {
  auto name = id;
  return TopicObserver(std::move(id), period_s, {std::string(kScanMinDistanceTopic)},
                       [name](std::span<const Sample> msgs) {
                         return qa_status(name, "safety", safety_attr(telemetry_value(msgs[0])));
                       });
}

DiagnosticsRecorder::DiagnosticsRecorder(Bus& bus) : bus_(bus) {
  id_ = bus_.subscribe(kDiagnosticsTopic, [this](const Sample& s) {
    const auto& st = std::get<DiagnosticStatus>(s.payload);
    for (const auto& [k, v] : st.values) rows_.push_back({s.t, st.name, st.level, k, v});
  });
}

DiagnosticsRecorder::~DiagnosticsRecorder() { bus_.unsubscribe(id_); }

std::string DiagnosticsRecorder::to_csv() const {
  std::string out = "t,observer,level,key,value\n";
  for (const auto& r : rows_) {
    util::CsvRow row;
    row << render_real(r.t) << r.observer << to_string(r.level) << r.key << r.value;
    out += row.str();
  }
  return out;
}

}  // namespace mros::diag
