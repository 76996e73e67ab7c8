#include <cmath>
#include <cstring>
#include <random>

#include "diagnostics/bus.hpp"
#include "diagnostics/observer.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace mros::diag;

TEST_CASE("publish delivers value and time to a subscriber") {
  Bus bus;
  std::vector<std::pair<double, double>> seen;
  bus.subscribe(kPowerLoadTopic, [&](const Sample& s) { seen.emplace_back(std::get<Telemetry>(s.payload).value, s.t); });
  bus.publish(kPowerLoadTopic, Telemetry{4.2}, 1.0);
  CHECK(seen == std::vector<std::pair<double, double>>{{4.2, 1.0}});
}

TEST_CASE("a diagnostic on a telemetry topic is a kind mismatch") {
  Bus bus;
  bus.publish(kPowerLoadTopic, Telemetry{1.0}, 0.0);
  CHECK_THROWS_AS(bus.publish(kPowerLoadTopic, DiagnosticStatus{Level::Ok, "x", "", {}}, 0.1), KindMismatch);
  Bus declared;
  declared.declare(kDiagnosticsTopic, PayloadKind::Diagnostic);
  CHECK_THROWS_AS(declared.publish(kDiagnosticsTopic, Telemetry{1.0}, 0.0), KindMismatch);
  CHECK(declared.latest(kDiagnosticsTopic) == nullptr);
  CHECK_THROWS_AS(declared.declare(kDiagnosticsTopic, PayloadKind::Telemetry), KindMismatch);
}

TEST_CASE("late subscribers receive the retained latest sample") {
  Bus bus;
  bus.publish(kPowerLoadTopic, Telemetry{1.0}, 0.0);
  bus.publish(kPowerLoadTopic, Telemetry{2.0}, 0.1);
  std::vector<double> seen;
  bus.subscribe(kPowerLoadTopic, [&](const Sample& s) { seen.push_back(std::get<Telemetry>(s.payload).value); });
  CHECK(seen == std::vector<double>{2.0});
  CHECK(bus.latest(kPowerLoadTopic)->t == 0.1);
}

TEST_CASE("unsubscribe stops delivery") {
  Bus bus;
  int calls = 0;
  const auto id = bus.subscribe("/x", [&](const Sample&) { ++calls; });
  bus.publish("/x", Telemetry{1.0}, 0.0);
  bus.unsubscribe(id);
  bus.publish("/x", Telemetry{1.0}, 0.1);
  CHECK(calls == 1);
}

TEST_CASE("delivery is FIFO for every subscriber") {
  std::mt19937_64 rng(1);
  Bus bus;
  Inbox a(bus, "/t");
  Inbox b(bus, "/t");
  std::vector<double> sent;
  for (int i = 0; i < 500; ++i) {
    const double v = std::uniform_real_distribution<double>(-1, 1)(rng);
    sent.push_back(v);
    bus.publish("/t", Telemetry{v}, i * 0.1);
  }
  for (Inbox* in : {&a, &b}) {
    std::vector<double> got;
    for (const auto& s : in->drain()) got.push_back(std::get<Telemetry>(s.payload).value);
    CHECK(got == sent);
    CHECK(in->empty());
  }
}

TEST_CASE("diagnostic keys are unique") {
  DiagnosticStatus st{Level::Ok, "obs", "", {}};
  st.add("energy", "0.5");
  CHECK_THROWS_AS(st.add("energy", "0.6"), std::invalid_argument);
  CHECK(*st.find("energy") == "0.5");
  CHECK(st.find("safety") == nullptr);
}

TEST_CASE("energy attribute at the endpoints and midpoint") {
  CHECK(energy_attr(5.0) == 1.0);
  CHECK(energy_attr(0.2) == 0.0);
  CHECK(energy_attr(2.6) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(energy_attr(0.0) == 0.0);
  CHECK(energy_attr(9.0) == 1.0);
}

TEST_CASE("energy attribute matches the load formula and is monotone") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = u(rng);
    CHECK(std::abs(energy_attr(p) - oracle::energy_formula(p)) <= 1e-12);
    const double q = u(rng);
    if (p <= q) CHECK(energy_attr(p) <= energy_attr(q));
  }
}

TEST_CASE("safety attribute at the endpoints and midpoint") {
  CHECK(safety_attr(2.0) == 1.0);
  CHECK(safety_attr(0.5) == 0.0);
  CHECK(std::abs(safety_attr(1.25) - (1.25 - 0.5) / (2.0 - 0.5)) <= 1e-12);
  CHECK(safety_attr(0.0) == 0.0);
  CHECK(safety_attr(50.0) == 1.0);
}

TEST_CASE("safety attribute is monotone and bounded") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(safety_attr(a) >= 0.0);
    CHECK(safety_attr(a) <= 1.0);
    if (a <= b) CHECK(safety_attr(a) <= safety_attr(b));
  }
}

TEST_CASE("rendered reals parse back exactly") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    double x;
    do {
      const auto bits = rng();
      std::memcpy(&x, &bits, sizeof x);
    } while (!std::isfinite(x));
    CHECK(parse_real(render_real(x)) == x);
  }
  CHECK(render_real(0.5) == "0.5");
  CHECK_FALSE(parse_real("0.5x"));
  CHECK_FALSE(parse_real(""));
}

TEST_CASE("observer period: ticks at 0.0, 0.2, 0.5 with period 0.5 emit at 0.0 and 0.5") {
  Bus bus;
  bus.publish(kPowerLoadTopic, Telemetry{2.6}, 0.0);
  auto obs = make_energy_observer("energy_observer", 0.5);
  CHECK(obs.tick(bus, 0.0));
  CHECK_FALSE(obs.tick(bus, 0.2));
  CHECK(obs.tick(bus, 0.5));
}

TEST_CASE("observer waits for every input") {
  Bus bus;
  auto obs = make_safety_observer();
  CHECK_FALSE(obs.tick(bus, 0.0));
  bus.publish(kScanMinDistanceTopic, Telemetry{1.25}, 0.05);
  const auto st = obs.tick(bus, 0.1);
  REQUIRE(st);
  CHECK(st->values.size() == 1);
  CHECK(st->values[0].first == "safety");
  CHECK(parse_real(st->values[0].second) == safety_attr(1.25));
}

TEST_CASE("energy observer message for a load of 2.6") {
  Bus bus;
  std::vector<DiagnosticStatus> published;
  bus.subscribe(kDiagnosticsTopic, [&](const Sample& s) { published.push_back(std::get<DiagnosticStatus>(s.payload)); });
  bus.publish(kPowerLoadTopic, Telemetry{2.6}, 0.0);
  auto obs = make_energy_observer();
  const auto st = obs.tick(bus, 0.0);
  REQUIRE(st);
  CHECK(st->level == Level::Ok);
  CHECK(st->message == "QA status");
  CHECK(st->name == "energy_observer");
  REQUIRE(st->values.size() == 1);
  CHECK(st->values[0].first == "energy");
  CHECK(*parse_real(st->values[0].second) == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(published.size() == 1);
  CHECK(published[0] == *st);
}

TEST_CASE("emission count over a window is floor(T/period) + 1") {
  for (double period : {0.1, 0.3, 0.5, 1.0}) {
    Bus bus;
    bus.publish(kPowerLoadTopic, Telemetry{1.0}, 0.0);
    auto obs = make_energy_observer("e", period);
    const double T = 10.0;
    int emitted = 0;
    for (int k = 0; k <= 1000; ++k)
      if (obs.tick(bus, k * 0.01)) ++emitted;
    CHECK(emitted == static_cast<int>(std::floor(T / period + 1e-9)) + 1);
  }
}

TEST_CASE("observer outputs reach /diagnostics as parseable pairs and CSV rows") {
  Bus bus;
  DiagnosticsRecorder rec(bus);
  auto e = make_energy_observer();
  auto s = make_safety_observer();
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    const double t = k * 0.1;
    bus.publish(kPowerLoadTopic, Telemetry{std::uniform_real_distribution<double>(0.2, 5.0)(rng)}, t);
    bus.publish(kScanMinDistanceTopic, Telemetry{std::uniform_real_distribution<double>(0.0, 10.0)(rng)}, t);
    e.tick(bus, t);
    s.tick(bus, t);
  }
  REQUIRE(rec.rows().size() == 100);
  for (const auto& r : rec.rows()) {
    CHECK((r.key == "energy" || r.key == "safety"));
    const auto v = parse_real(r.value);
    REQUIRE(v);
    CHECK(*v >= 0.0);
    CHECK(*v <= 1.0);
  }
  const auto table = oracle::read_simple_csv(rec.to_csv());
  CHECK(table.header == std::vector<std::string>{"t", "observer", "level", "key", "value"});
  CHECK(table.rows.size() == 100);
  CHECK(table.rows[0][1] == "energy_observer");
  CHECK(table.rows[0][2] == "OK");
}

TEST_CASE("observer construction rejects bad arguments") {
  CHECK_THROWS_AS(make_energy_observer("", 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_energy_observer("e", 0.0), std::invalid_argument);
}
