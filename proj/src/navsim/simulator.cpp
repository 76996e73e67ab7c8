#include "navsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "diagnostics/observer.hpp"

namespace mros::nav {

namespace {

constexpr double kTimeEps = 1e-9;

// Obstacle geometry ranges. Spawning at least 2 m ahead keeps a fresh
// obstacle outside the collision radius for any lateral offset.
constexpr double kAheadMin = 2.0, kAheadMax = 4.0;
constexpr double kLateralMax = 1.5;
constexpr double kRadiusMin = 0.2, kRadiusMax = 0.4;
constexpr double kLifetimeMin = 6.0, kLifetimeMax = 15.0;

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(Vec2 a, double k) { return {a.x * k, a.y * k}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 corridor_heading(const MissionSpec& spec) {
  const Vec2 d = spec.goal - spec.start;
  const double n = norm(d);
  return n > 0.0 ? d * (1.0 / n) : Vec2{1.0, 0.0};
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

std::string_view to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Running: return "RUNNING";
    case MissionStatus::Success: return "SUCCESS";
    case MissionStatus::Collision: return "COLLISION";
    case MissionStatus::BatteryDepleted: return "BATTERY_DEPLETED";
    case MissionStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

std::vector<ObstacleEvent> draw_obstacle_schedule(const MissionSpec& spec) {
  std::vector<ObstacleEvent> out;
  if (!(spec.obstacle_rate > 0.0)) return out;
  std::mt19937_64 rng(spec.seed);
  double t = 0.0;
  for (;;) {
    t += -std::log1p(-uniform01(rng)) / spec.obstacle_rate;
    if (t > spec.duration_limit_s) break;
    ObstacleEvent e;
    e.t = t;
    e.ahead = uniform(rng, kAheadMin, kAheadMax);
    e.lateral = uniform(rng, -kLateralMax, kLateralMax);
    e.radius = uniform(rng, kRadiusMin, kRadiusMax);
    e.lifetime = uniform(rng, kLifetimeMin, kLifetimeMax);
    out.push_back(e);
  }
  return out;
}

double power_load(double velocity, double acceleration) {
  const double v = velocity / kRefVelocity;
  return diag::kIdleLoad + 3.0 * v * v + 1.8 * (std::abs(acceleration) / kRefAcceleration);
}

double min_obstacle_distance(const Vec2& robot, const std::vector<Obstacle>& obstacles) {
  double d = kSensorRange;
  for (const auto& o : obstacles) d = std::min(d, norm(o.position - robot) - o.radius);
  return d;
}

double allowed_speed(const NavParams& p, double d) {
  return p.max_vel * std::clamp((d - p.safety_margin) / diag::kSafeDistance, 0.0, 1.0);
}

WorldState step(const WorldState& world, const std::optional<NavParams>& params, const MissionSpec& spec,
                const std::vector<ObstacleEvent>& schedule, DriveMode mode) {
  WorldState w = world;
  w.step = world.step + 1;
  w.t = static_cast<double>(w.step) * spec.dt;
  const Vec2 heading = corridor_heading(spec);
  const Vec2 normal{-heading.y, heading.x};

  while (w.next_event < schedule.size() && schedule[w.next_event].t <= w.t + kTimeEps) {
    const auto& e = schedule[w.next_event++];
    w.obstacles.push_back({w.position + heading * e.ahead + normal * e.lateral, e.radius, e.t + e.lifetime});
  }
  std::erase_if(w.obstacles, [&](const Obstacle& o) {
    return o.expires_at <= w.t + kTimeEps || dot(o.position - w.position, heading) < -(o.radius + diag::kSafeDistance);
  });

  const double v = world.velocity;
  double v_new = 0.0;
  if (params) {
    double target = 0.0;
    if (mode == DriveMode::Drive && w.goal)
      target = std::min(params->max_vel, allowed_speed(*params, min_obstacle_distance(w.position, w.obstacles)));
    const double dv = params->acc_lim * spec.dt;
    v_new = std::max(0.0, std::clamp(target, v - dv, v + dv));
  } else if (v != 0.0) {
    throw std::logic_error("robot moving without navigation parameters");
  }
  w.velocity = v_new;
  w.acceleration = (v_new - v) / spec.dt;

  const Vec2 dir = w.goal ? *w.goal - w.position : heading;
  const double remaining = norm(dir);
  if (remaining > 0.0) {
    const double len = w.goal ? std::min(v_new * spec.dt, remaining) : v_new * spec.dt;
    w.position = w.position + dir * (len / remaining);
  }

  w.min_obstacle_distance = min_obstacle_distance(w.position, w.obstacles);
  w.power_load = power_load(w.velocity, w.acceleration);
  w.battery -= kBatteryPerLoadSecond * w.power_load * spec.dt;
  return w;
}

MissionStatus mission_status(const WorldState& w, const MissionSpec& spec) {
  if (norm(w.position - spec.goal) <= kGoalTolerance) return MissionStatus::Success;
  if (w.min_obstacle_distance < diag::kCriticalDistance) return MissionStatus::Collision;
  if (w.battery <= 0.0) return MissionStatus::BatteryDepleted;
  if (w.t > spec.duration_limit_s + kTimeEps) return MissionStatus::Timeout;
  return MissionStatus::Running;
}

Simulator::Simulator(MissionSpec spec, diag::Bus& bus) : spec_(spec), bus_(bus) {
  if (!(spec_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(spec_.duration_limit_s > 0.0)) throw std::invalid_argument("duration limit must be positive");
  if (!(spec_.obstacle_rate >= 0.0)) throw std::invalid_argument("obstacle rate must be non-negative");
  schedule_ = draw_obstacle_schedule(spec_);
  world_.position = spec_.start;
  world_.goal = spec_.goal;
  world_.battery = spec_.initial_battery;
  world_.power_load = diag::kIdleLoad;
  world_.min_obstacle_distance = kSensorRange;
  components_.emplace(std::string(kMoveBase), Component{});
  bus_.declare(diag::kPowerLoadTopic, diag::PayloadKind::Telemetry);
  bus_.declare(diag::kScanMinDistanceTopic, diag::PayloadKind::Telemetry);
  bus_.declare(diag::kDiagnosticsTopic, diag::PayloadKind::Diagnostic);
}

Simulator::Component& Simulator::component(std::string_view name) {
  auto it = components_.find(name);
  if (it == components_.end()) throw UnknownComponent("unknown component '" + std::string(name) + "'");
  return it->second;
}

bool Simulator::component_running(std::string_view name) const {
  auto it = components_.find(name);
  return it != components_.end() && it->second.running;
}

void Simulator::inject_fault(std::string_view name, double at) { component(name).fault_at = at; }

void Simulator::fail_next_start(std::string_view name) { component(name).fail_next_start = true; }

void Simulator::step() {
  const auto& mb = components_.at(std::string(kMoveBase));
  const bool faulted = mb.fault_at && world_.t + spec_.dt >= *mb.fault_at - kTimeEps;
  advance(mb.running && !faulted ? DriveMode::Drive : DriveMode::Hold);
}

void Simulator::advance(DriveMode mode) {
  world_ = nav::step(world_, params_, spec_, schedule_, mode);
  bus_.publish(diag::kPowerLoadTopic, diag::Telemetry{world_.power_load}, world_.t);
  bus_.publish(diag::kScanMinDistanceTopic, diag::Telemetry{world_.min_obstacle_distance}, world_.t);
  for (const auto& [name, c] : components_) {
    if (c.running && c.fault_at && world_.t >= *c.fault_at - kTimeEps) {
      diag::DiagnosticStatus st;
      st.level = diag::Level::Error;
      st.name = name;
      st.message = "component fault";
      st.add("component", name);
      bus_.publish(diag::kDiagnosticsTopic, st, world_.t);
    }
  }
  if (hook_) hook_();
}

std::optional<exec::Goal> Simulator::active_goal() const {
  if (!world_.goal) return std::nullopt;
  return exec::Goal{world_.goal->x, world_.goal->y};
}

bool Simulator::has_component(std::string_view name) const { return components_.contains(name); }

bool Simulator::accepts_parameter(std::string_view name) const {
  return name == kParamMaxVel || name == kParamAccLim || name == kParamSafetyMargin;
}

void Simulator::stop_component(std::string_view name) { component(name).running = false; }

void Simulator::start_component(std::string_view name) {
  auto& c = component(name);
  if (c.fail_next_start) {
    c.fail_next_start = false;
    throw exec::ApplyFailure(std::string(name), "component '" + std::string(name) + "' failed to start");
  }
  c.running = true;
  // A restart repairs an active fault; one scheduled for later still fires.
  if (c.fault_at && world_.t >= *c.fault_at - kTimeEps) c.fault_at.reset();
}

exec::ParamSet Simulator::parameters() const {
  if (!params_) return {};
  return {{std::string(kParamMaxVel), params_->max_vel},
          {std::string(kParamAccLim), params_->acc_lim},
          {std::string(kParamSafetyMargin), params_->safety_margin}};
}

void Simulator::apply_parameters(const exec::ParamSet& params) {
  if (params.empty()) {
    if (world_.velocity != 0.0) throw exec::ApplyFailure("move_base", "cannot unconfigure a moving robot");
    params_.reset();
    return;
  }
  NavParams next = params_.value_or(NavParams{});
  for (const auto& [name, value] : params) {
    if (name == kParamMaxVel) next.max_vel = value;
    else if (name == kParamAccLim) next.acc_lim = value;
    else if (name == kParamSafetyMargin) next.safety_margin = value;
    else throw exec::ApplyFailure(name, "unknown parameter '" + name + "'");
  }
  for (double v : {next.max_vel, next.acc_lim, next.safety_margin})
    if (!(v > 0.0) || !std::isfinite(v))
      throw exec::ApplyFailure("move_base", "navigation parameters must be positive and finite");
  params_ = next;
}

void Simulator::hold(double duration_s) {
  const auto steps = static_cast<long>(std::llround(duration_s / spec_.dt));
  for (long i = 0; i < steps; ++i) advance(DriveMode::Hold);
}

}  // namespace mros::nav
