#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "diagnostics/observer.hpp"
#include "doctest.h"
#include "dsl/model.hpp"
#include "navsim/case_study.hpp"
#include "navsim/simulator.hpp"

using namespace mros;
using namespace mros::nav;

namespace {

exec::ParamSet params_of(const NavParams& p) {
  return {{"max_vel", p.max_vel}, {"acc_lim", p.acc_lim}, {"safety_margin", p.safety_margin}};
}

MissionSpec open_corridor() {
  MissionSpec s;
  s.obstacle_rate = 0.0;
  return s;
}

// Closed-form peak load of a bounded-acceleration ramp from rest: every full
// step runs at acc_lim, the last partial step covers the remainder.
double ramp_peak_load(const NavParams& p, double dt) {
  const double dv = p.acc_lim * dt;
  const double full_steps = std::floor(p.max_vel / dv);
  const double v_full = full_steps * dv;
  const double last_full = full_steps > 0 ? 0.2 + 3.0 * v_full * v_full + 1.8 * p.acc_lim / 3.6 : 0.2;
  const double partial = 0.2 + 3.0 * p.max_vel * p.max_vel + 1.8 * ((p.max_vel - v_full) / dt) / 3.6;
  const double cruise = 0.2 + 3.0 * p.max_vel * p.max_vel;
  return std::max({last_full, partial, cruise});
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

TEST_CASE("power load at rest and at the reference extremes") {
  CHECK(power_load(0.0, 0.0) == 0.2);
  CHECK(power_load(1.0, 3.6) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(power_load(1.0, -3.6) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("power load stays within [0.2, 5.0] inside the reference envelope") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(0.0, 1.0), a(-3.6, 3.6);
  for (int i = 0; i < 5000; ++i) {
    const double p = power_load(v(rng), a(rng));
    CHECK(p >= 0.2);
    CHECK(p <= 5.0 + 1e-12);
  }
}

TEST_CASE("velocity reaches 0.3 in one step with acc_lim 3.6 and stays there") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  sim.apply_parameters(params_of({0.3, 3.6, 0.9}));
  const int steps_needed = static_cast<int>(std::ceil(0.3 / (3.6 * 0.1)));
  CHECK(steps_needed == 1);
  sim.step();
  CHECK(sim.world().velocity == doctest::Approx(0.3).epsilon(1e-12));
  for (int i = 0; i < 50; ++i) {
    sim.step();
    CHECK(sim.world().velocity == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("allowed speed scales with clearance beyond the margin") {
  const NavParams p{1.0, 1.2, 0.6};
  CHECK(allowed_speed(p, 0.5) == 0.0);
  CHECK(allowed_speed(p, 0.6) == 0.0);
  CHECK(allowed_speed(p, 1.6) == doctest::Approx(0.5));
  CHECK(allowed_speed(p, 2.6) == 1.0);
  CHECK(allowed_speed(p, 10.0) == 1.0);
}

TEST_CASE("mission status rules in priority order") {
  const MissionSpec spec;
  WorldState w;
  w.position = spec.goal;
  w.battery = 0.4;
  CHECK(mission_status(w, spec) == MissionStatus::Success);

  w.position = {5.0, 0.0};
  w.min_obstacle_distance = 0.49;
  CHECK(mission_status(w, spec) == MissionStatus::Collision);
  w.min_obstacle_distance = 0.5;
  CHECK(mission_status(w, spec) == MissionStatus::Running);

  w.battery = 0.0;
  CHECK(mission_status(w, spec) == MissionStatus::BatteryDepleted);
  w.battery = 0.4;

  w.t = spec.duration_limit_s + spec.dt;
  CHECK(mission_status(w, spec) == MissionStatus::Timeout);
  w.t = spec.duration_limit_s;
  CHECK(mission_status(w, spec) == MissionStatus::Running);

  // Goal beats every failure.
  w.position = {spec.goal.x - 0.15, spec.goal.y};
  w.min_obstacle_distance = 0.1;
  w.battery = -1.0;
  w.t = 1e9;
  CHECK(mission_status(w, spec) == MissionStatus::Success);
}

TEST_CASE("injected faults publish ERROR diagnostics until a restart") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  sim.apply_parameters(params_of({0.6, 2.4, 0.9}));
  std::vector<double> error_times;
  bus.subscribe(diag::kDiagnosticsTopic, [&](const diag::Sample& s) {
    const auto& st = std::get<diag::DiagnosticStatus>(s.payload);
    if (st.level == diag::Level::Error) {
      CHECK(*st.find("component") == "move_base");
      error_times.push_back(s.t);
    }
  });
  sim.inject_fault("move_base", 5.0);
  for (int i = 0; i < 60; ++i) sim.step();
  REQUIRE_FALSE(error_times.empty());
  CHECK(error_times.front() == doctest::Approx(5.0));
  CHECK(error_times.size() == 11);
  // The faulted planner no longer drives the robot.
  CHECK(sim.world().velocity < 0.6);

  sim.stop_component("move_base");
  sim.start_component("move_base");
  error_times.clear();
  for (int i = 0; i < 10; ++i) sim.step();
  CHECK(error_times.empty());
  CHECK_THROWS_AS(sim.inject_fault("no_such", 1.0), UnknownComponent);
}

TEST_CASE("a restart before a scheduled fault does not cancel it") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  sim.apply_parameters(params_of({0.6, 2.4, 0.9}));
  int errors = 0;
  bus.subscribe(diag::kDiagnosticsTopic, [&](const diag::Sample& s) {
    if (std::get<diag::DiagnosticStatus>(s.payload).level == diag::Level::Error) ++errors;
  });
  sim.inject_fault("move_base", 2.0);
  sim.step();
  sim.stop_component("move_base");
  sim.start_component("move_base");
  for (int i = 0; i < 30; ++i) sim.step();
  CHECK(errors > 0);
}

TEST_CASE("parameter updates are validated and atomic") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  sim.apply_parameters(params_of({0.6, 2.4, 0.9}));
  const auto before = sim.parameters();
  CHECK_THROWS_AS(sim.apply_parameters({{"max_vel", 1.0}, {"acc_lim", -1.0}}), exec::ApplyFailure);
  CHECK_THROWS_AS(sim.apply_parameters({{"max_vel", 1.0}, {"turbo", 1.0}}), exec::ApplyFailure);
  CHECK_THROWS_AS(sim.apply_parameters({{"max_vel", std::nan("")}}), exec::ApplyFailure);
  CHECK(sim.parameters() == before);
  sim.step();
  CHECK_THROWS_AS(sim.apply_parameters({}), exec::ApplyFailure);
  CHECK(sim.accepts_parameter("max_vel"));
  CHECK_FALSE(sim.accepts_parameter("turbo"));
}

TEST_CASE("an unconfigured robot stays at rest") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  for (int i = 0; i < 5; ++i) sim.step();
  CHECK(sim.world().velocity == 0.0);
  CHECK(sim.world().position == Vec2{0.0, 0.0});
  CHECK(sim.world().power_load == 0.2);
}

TEST_CASE("simulator construction validates the mission") {
  diag::Bus bus;
  MissionSpec bad = open_corridor();
  bad.dt = 0.0;
  CHECK_THROWS_AS(Simulator(bad, bus), std::invalid_argument);
  bad = open_corridor();
  bad.duration_limit_s = -1.0;
  CHECK_THROWS_AS(Simulator(bad, bus), std::invalid_argument);
}

TEST_CASE("obstacle arrival counts match the Poisson mean within three sigma") {
  MissionSpec spec;
  spec.obstacle_rate = 0.1;
  spec.duration_limit_s = 300.0;
  const int seeds = 200;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    spec.seed = 1000 + s;
    const auto schedule = draw_obstacle_schedule(spec);
    total += static_cast<double>(schedule.size());
    for (std::size_t i = 1; i < schedule.size(); ++i) CHECK(schedule[i].t > schedule[i - 1].t);
    for (const auto& e : schedule) CHECK(e.t <= spec.duration_limit_s);
  }
  const double mean = spec.obstacle_rate * spec.duration_limit_s * seeds;
  CHECK(std::abs(total - mean) <= 3.0 * std::sqrt(mean));
}

TEST_CASE("the obstacle schedule depends on the seed alone") {
  MissionSpec a;
  MissionSpec b = a;
  b.goal = {10.0, 10.0};
  b.initial_battery = 0.5;
  const auto sa = draw_obstacle_schedule(a);
  const auto sb = draw_obstacle_schedule(b);
  REQUIRE(sa.size() == sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].t == sb[i].t);
    CHECK(sa[i].ahead == sb[i].ahead);
  }
  b.seed = a.seed + 1;
  CHECK(draw_obstacle_schedule(b).front().t != sa.front().t);
}

TEST_CASE("identical spec and decisions give bit-identical trajectories") {
  const NavParams choices[] = {{0.3, 1.2, 0.6}, {1.0, 3.6, 1.2}, {0.6, 2.4, 0.9}};
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    MissionSpec spec;
    spec.seed = seed;
    diag::Bus b1, b2;
    Simulator s1(spec, b1), s2(spec, b2);
    for (int i = 0; i < 600; ++i) {
      if (i % 100 == 0) {
        s1.apply_parameters(params_of(choices[(i / 100) % 3]));
        s2.apply_parameters(params_of(choices[(i / 100) % 3]));
      }
      s1.step();
      s2.step();
      const auto &w1 = s1.world(), &w2 = s2.world();
      REQUIRE(w1.position == w2.position);
      REQUIRE(w1.velocity == w2.velocity);
      REQUIRE(w1.battery == w2.battery);
      REQUIRE(w1.min_obstacle_distance == w2.min_obstacle_distance);
    }
  }
}

TEST_CASE("per-step speed and battery bookkeeping") {
  std::mt19937_64 rng(5);
  for (int run = 0; run < 30; ++run) {
    MissionSpec spec;
    spec.seed = rng();
    spec.obstacle_rate = 0.3;
    diag::Bus bus;
    Simulator sim(spec, bus);
    NavParams p{kGridMaxVel[rng() % 3], kGridAccLim[rng() % 3], kGridSafetyMargin[rng() % 3]};
    sim.apply_parameters(params_of(p));
    double v_prev = sim.world().velocity;
    double load_dt_sum = 0.0;
    const double battery0 = sim.world().battery;
    sim.set_step_hook([&] {
      const auto& w = sim.world();
      CHECK(w.velocity <= p.max_vel + 1e-9);
      CHECK(std::abs(w.velocity - v_prev) <= p.acc_lim * spec.dt + 1e-9);
      if (w.velocity <= 1.0 && std::abs(w.acceleration) <= 3.6) {
        CHECK(w.power_load >= 0.2);
        CHECK(w.power_load <= 5.0 + 1e-12);
      }
      load_dt_sum += w.power_load * spec.dt;
      v_prev = w.velocity;
    });
    for (int i = 0; i < 2000 && sim.status() == MissionStatus::Running; ++i) {
      if (rng() % 40 == 0) {
        // Lowering max_vel mid-run is bounded by braking, so the speed bound
        // is checked against the larger of the two settings for one ramp.
        const NavParams next{kGridMaxVel[rng() % 3], p.acc_lim, kGridSafetyMargin[rng() % 3]};
        if (next.max_vel >= sim.world().velocity) {
          p = next;
          sim.apply_parameters(params_of(p));
        }
      }
      if (rng() % 300 == 0) sim.hold(1.0);
      else sim.step();
      CHECK(sim.world().battery <= battery0);
    }
    CHECK(std::abs((battery0 - sim.world().battery) - kBatteryPerLoadSecond * load_dt_sum) <= 1e-9);
  }
}

TEST_CASE("hold brakes at acc_lim and keeps the robot still") {
  diag::Bus bus;
  Simulator sim(open_corridor(), bus);
  sim.apply_parameters(params_of({1.0, 1.2, 0.9}));
  for (int i = 0; i < 20; ++i) sim.step();
  REQUIRE(sim.world().velocity == doctest::Approx(1.0));
  const double t0 = sim.time();
  sim.hold(2.0);
  CHECK(sim.time() == doctest::Approx(t0 + 2.0));
  CHECK(sim.world().velocity == 0.0);
  const auto pos = sim.world().position;
  sim.hold(1.0);
  CHECK(sim.world().position == pos);
}

TEST_CASE("an obstacle ahead slows the robot down") {
  MissionSpec spec = open_corridor();
  const std::vector<ObstacleEvent> schedule = {{0.05, 3.0, 0.0, 0.3, 100.0}};
  WorldState w;
  w.goal = spec.goal;
  const NavParams p{1.0, 3.6, 1.2};
  double min_d = kSensorRange;
  for (int i = 0; i < 100; ++i) {
    w = step(w, p, spec, schedule, DriveMode::Drive);
    min_d = std::min(min_d, w.min_obstacle_distance);
  }
  CHECK(min_d >= p.safety_margin - 1.0 * 1.0 / (2 * 3.6) - 1e-9);
  CHECK(min_d > 0.5);
  CHECK(w.velocity < 0.2);
}

TEST_CASE("obstacles are removed once passed or expired") {
  MissionSpec spec = open_corridor();
  spec.goal = {100.0, 0.0};
  const std::vector<ObstacleEvent> schedule = {{0.05, 3.0, 1.4, 0.2, 100.0}, {0.05, 3.0, -1.4, 0.2, 0.5}};
  WorldState w;
  w.goal = spec.goal;
  const NavParams p{1.0, 3.6, 0.6};
  for (int i = 0; i < 10; ++i) w = step(w, p, spec, schedule, DriveMode::Drive);
  CHECK(w.obstacles.size() == 1);
  for (int i = 0; i < 200; ++i) w = step(w, p, spec, schedule, DriveMode::Drive);
  CHECK(w.obstacles.empty());
}

// ------------------------------------------------------------ case study

TEST_CASE("the case study has 27 designs solving one function") {
  const auto kb = dsl::build_knowledge_base(case_study_designs());
  CHECK(kb.designs().size() == 27);
  for (const auto& [id, fd] : kb.designs()) CHECK(fd.solves == "f_navigate");
  CHECK(kb.functions().size() == 1);
}

TEST_CASE("the reference design carries the pinned values") {
  const auto kb = dsl::build_knowledge_base(case_study_designs());
  const auto& fd = kb.design(kReferenceDesign);
  CHECK(fd.expected("safety") == 0.7);
  CHECK(fd.expected("energy") == 0.33);
  const auto cfg = case_study_config();
  const auto* spec = cfg.find(fd.config_ref);
  REQUIRE(spec);
  CHECK(*spec->param("max_vel") == 0.3);
  CHECK(*spec->param("acc_lim") == 3.6);
}

TEST_CASE("expected values match the closed-form clearance and ramp-load models") {
  const auto kb = dsl::build_knowledge_base(case_study_designs());
  const auto cfg = case_study_config();
  for (const auto& [id, fd] : kb.designs()) {
    if (id == kReferenceDesign) continue;
    const auto* spec = cfg.find(fd.config_ref);
    REQUIRE(spec);
    const NavParams p{*spec->param("max_vel"), *spec->param("acc_lim"), *spec->param("safety_margin")};
    const double standoff = std::max(0.0, p.safety_margin - p.max_vel * p.max_vel / (2.0 * p.acc_lim));
    CHECK(std::abs(*fd.expected("safety") - clamp01((standoff - 0.5) / 1.5)) <= 1e-12);
    CHECK(std::abs(*fd.expected("energy") - clamp01((ramp_peak_load(p, 0.1) - 0.2) / 4.8)) <= 1e-12);
  }
}

TEST_CASE("expected values are monotone along the grid axes") {
  const auto kb = dsl::build_knowledge_base(case_study_designs());
  auto qa = [&](int i, int j, int k, const char* type) { return *kb.design(design_id(i, j, k)).expected(type); };
  auto computed = [&](int i, int j, int k) { return design_id(i, j, k) != kReferenceDesign; };
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        if (!computed(i, j, k)) continue;
        if (k < 3 && computed(i, j, k + 1)) CHECK(qa(i, j, k, "safety") <= qa(i, j, k + 1, "safety"));
        if (i < 3 && computed(i + 1, j, k)) {
          CHECK(qa(i, j, k, "safety") >= qa(i + 1, j, k, "safety"));
          CHECK(qa(i, j, k, "energy") <= qa(i + 1, j, k, "energy"));
        }
        if (j < 3 && computed(i, j + 1, k)) CHECK(qa(i, j, k, "energy") <= qa(i, j + 1, k, "energy"));
      }
}

TEST_CASE("the case-study files are written and load back") {
  const auto dir = std::filesystem::temp_directory_path() / "mros_case_study_test";
  std::filesystem::remove_all(dir);
  write_case_study(dir);
  CHECK(std::filesystem::exists(dir / kCaseStudyModelFile));
  CHECK(std::filesystem::exists(dir / kCaseStudyConfigFile));
  std::ifstream in(dir / kCaseStudyModelFile);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text.rfind("#", 0) == 0);
  CHECK(text.find("synthetic") != std::string::npos);
  CHECK(dsl::parse_model(text) == case_study_designs());
  std::filesystem::remove_all(dir);
}
