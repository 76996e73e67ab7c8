#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostics/bus.hpp"
#include "executor/executor.hpp"

namespace mros::nav {

inline constexpr double kRefVelocity = 1.0;       // m/s
inline constexpr double kRefAcceleration = 3.6;   // m/s^2
inline constexpr double kBatteryPerLoadSecond = 0.0005;
inline constexpr double kSensorRange = 10.0;      // m, reported when nothing is in view
inline constexpr double kGoalTolerance = 0.2;     // m
inline constexpr std::string_view kMoveBase = "move_base";

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

struct NavParams {
  double max_vel = 0.0;
  double acc_lim = 0.0;
  double safety_margin = 0.0;
  bool operator==(const NavParams&) const = default;
};

/// Names accepted by Simulator::apply_parameters.
inline constexpr std::string_view kParamMaxVel = "max_vel";
inline constexpr std::string_view kParamAccLim = "acc_lim";
inline constexpr std::string_view kParamSafetyMargin = "safety_margin";

/// One pre-drawn obstacle arrival. Geometry is relative to the robot at
/// spawn time: `ahead` along the corridor, `lateral` across it.
struct ObstacleEvent {
  double t = 0.0;
  double ahead = 0.0;
  double lateral = 0.0;
  double radius = 0.0;
  double lifetime = 0.0;
};

struct Obstacle {
  Vec2 position;
  double radius = 0.0;
  double expires_at = 0.0;
};

struct MissionSpec {
  Vec2 start{0.0, 0.0};
  Vec2 goal{30.0, 0.0};
  double duration_limit_s = 300.0;
  double obstacle_rate = 0.1;  // arrivals per second
  std::uint64_t seed = 42;
  double dt = 0.1;
  double initial_battery = 1.0;
};

struct WorldState {
  Vec2 position;
  double velocity = 0.0;
  double acceleration = 0.0;  // signed, last step
  std::optional<Vec2> goal;
  std::vector<Obstacle> obstacles;
  double min_obstacle_distance = kSensorRange;
  double battery = 1.0;
  double power_load = 0.2;
  double t = 0.0;
  std::uint64_t step = 0;
  std::size_t next_event = 0;  // index into the obstacle schedule
};

enum class DriveMode { Drive, Hold };

enum class MissionStatus { Running, Success, Collision, BatteryDepleted, Timeout };
std::string_view to_string(MissionStatus s);

/// Poisson arrivals with uniform geometry, drawn from the seed alone so every
/// run with that seed sees the same schedule whatever the robot does.
std::vector<ObstacleEvent> draw_obstacle_schedule(const MissionSpec& spec);

double power_load(double velocity, double acceleration);
/// Clearance from the robot to the nearest obstacle surface, capped at the sensor range.
double min_obstacle_distance(const Vec2& robot, const std::vector<Obstacle>& obstacles);
/// Speed the local planner allows at clearance `d`.
double allowed_speed(const NavParams& params, double d);

/// One dt tick: spawn/despawn obstacles, plan speed, integrate, update load
/// and battery. Hold brakes at acc_lim toward zero regardless of the goal.
/// `params` may be empty only while the robot is at rest.
WorldState step(const WorldState& world, const std::optional<NavParams>& params, const MissionSpec& spec,
                const std::vector<ObstacleEvent>& schedule, DriveMode mode);

/// First matching rule wins: goal reached, collision, battery, timeout.
MissionStatus mission_status(const WorldState& world, const MissionSpec& spec);

class UnknownComponent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The managed system: world stepping plus the move_base component, its
/// parameters and faults. Publishes /power_load and /scan_min_distance after
/// every step, and ERROR diagnostics for a faulted running component.
class Simulator : public exec::ManagedSystem {
 public:
  Simulator(MissionSpec spec, diag::Bus& bus);

  /// Called after every step, including the steps of a hold.
  void set_step_hook(std::function<void()> hook) { hook_ = std::move(hook); }

  void step();
  MissionStatus status() const { return mission_status(world_, spec_); }

  const WorldState& world() const { return world_; }
  const MissionSpec& spec() const { return spec_; }
  const std::vector<ObstacleEvent>& schedule() const { return schedule_; }
  const std::optional<NavParams>& params() const { return params_; }
  bool component_running(std::string_view name) const;

  void inject_fault(std::string_view component, double at);
  /// Test hook: the next start of `component` throws ApplyFailure.
  void fail_next_start(std::string_view component);

  double time() const override { return world_.t; }
  std::optional<exec::Goal> active_goal() const override;
  void cancel_goal() override { world_.goal.reset(); }
  void set_goal(const exec::Goal& goal) override { world_.goal = Vec2{goal.x, goal.y}; }
  bool has_component(std::string_view name) const override;
  bool accepts_parameter(std::string_view name) const override;
  void stop_component(std::string_view name) override;
  void start_component(std::string_view name) override;
  exec::ParamSet parameters() const override;
  void apply_parameters(const exec::ParamSet& params) override;
  void hold(double duration_s) override;

 private:
  struct Component {
    bool running = true;
    std::optional<double> fault_at;
    bool fail_next_start = false;
  };

  void advance(DriveMode mode);
  Component& component(std::string_view name);

  MissionSpec spec_;
  diag::Bus& bus_;
  std::vector<ObstacleEvent> schedule_;
  WorldState world_;
  std::optional<NavParams> params_;
  std::map<std::string, Component, std::less<>> components_;
  std::function<void()> hook_;
};

}  // namespace mros::nav
