#include "diagnostics/bus.hpp"

#include <algorithm>

namespace mros::diag {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Ok: return "OK";
    case Level::Warn: return "WARN";
    case Level::Error: return "ERROR";
  }
  return "?";
}

void DiagnosticStatus::add(std::string key, std::string value) {
  if (find(key)) throw std::invalid_argument("repeated diagnostic key '" + key + "'");
  values.emplace_back(std::move(key), std::move(value));
}

const std::string* DiagnosticStatus::find(std::string_view key) const {
  for (const auto& [k, v] : values)
    if (k == key) return &v;
  return nullptr;
}

PayloadKind kind_of(const Payload& p) {
  return std::holds_alternative<Telemetry>(p) ? PayloadKind::Telemetry : PayloadKind::Diagnostic;
}

Bus::Topic& Bus::topic(std::string_view name) {
  auto it = topics_.find(name);
  if (it == topics_.end()) it = topics_.emplace(std::string(name), Topic{}).first;
  return it->second;
}

void Bus::declare(std::string_view name, PayloadKind kind) {
  auto& t = topic(name);
  if (t.kind && *t.kind != kind) throw KindMismatch("topic " + std::string(name) + " already has another payload kind");
  t.kind = kind;
}

void Bus::publish(std::string_view name, Payload payload, double t) {
  auto& tp = topic(name);
  const auto kind = kind_of(payload);
  if (tp.kind && *tp.kind != kind)
    throw KindMismatch("payload kind does not match topic " + std::string(name));
  tp.kind = kind;
  tp.latest = Sample{std::move(payload), t};
  // Handlers may subscribe or publish; deliver to a snapshot of the list.
  const Sample sample = *tp.latest;
  const auto subscribers = tp.subscribers;
  for (const auto& [id, handler] : subscribers) handler(sample);
}

Bus::SubscriptionId Bus::subscribe(std::string_view name, Handler handler) {
  auto& tp = topic(name);
  const auto id = next_id_++;
  tp.subscribers.emplace_back(id, handler);
  if (tp.latest) {
    const Sample retained = *tp.latest;
    handler(retained);
  }
  return id;
}

void Bus::unsubscribe(SubscriptionId id) {
  for (auto& [name, tp] : topics_)
    std::erase_if(tp.subscribers, [id](const auto& s) { return s.first == id; });
}

const Sample* Bus::latest(std::string_view name) const {
  auto it = topics_.find(name);
  if (it == topics_.end() || !it->second.latest) return nullptr;
  return &*it->second.latest;
}

std::optional<PayloadKind> Bus::kind(std::string_view name) const {
  auto it = topics_.find(name);
  return it == topics_.end() ? std::nullopt : it->second.kind;
}

Inbox::Inbox(Bus& bus, std::string_view topic) : bus_(bus) {
  id_ = bus_.subscribe(topic, [this](const Sample& s) { queue_.push_back(s); });
}

Inbox::~Inbox() { bus_.unsubscribe(id_); }

std::vector<Sample> Inbox::drain() {
  std::vector<Sample> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

}  // namespace mros::diag
