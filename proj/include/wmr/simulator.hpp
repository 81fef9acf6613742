#pragma once

// Deterministic fixed-step closed-loop simulation of the robot under a
// flat-space controller.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wmr/controllers.hpp"
#include "wmr/disturbance.hpp"
#include "wmr/flatness.hpp"
#include "wmr/model.hpp"
#include "wmr/trajectory.hpp"

namespace wmr {

struct Limits {
  double v_max = 0.22;  // m/s
  double w_max = 2.84;  // rad/s
};

/// Componentwise clamp to [-v_max, v_max] x [-w_max, w_max].
BodyTwist saturate(const BodyTwist& t, const Limits& limits);

struct NamedController {
  std::string label;
  control::ControllerConfig config;
};

struct Scenario {
  std::string id = "scenario";
  TrajectorySpec trajectory;
  NamedController controller{"INH-SMC", control::InhsmcConfig{}};
  std::optional<NamedController> baseline;
  DisturbanceSpec disturbance;
  Limits limits;
  RobotGeometry geometry;
  double dt = 0.01;
  double duration = 140.0;
  int control_decimation = 1;
  Pose initial_pose;
  double initial_v = 0.15;
  std::uint64_t seed = 0;

  /// Throws ScenarioInvalid naming the offending field.
  void validate() const;

  /// Places the robot exactly on the reference at t = 0.
  void start_on_reference();

  std::size_t step_count() const;
};

struct TraceRow {
  double t = 0.0;
  Pose pose;
  BodyTwist commanded;
  BodyTwist saturated;
  FlatPoint actual;
  FlatPoint desired;
  Eigen::Vector2d e = Eigen::Vector2d::Zero();
  Eigen::Vector2d e_dot = Eigen::Vector2d::Zero();
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  Eigen::Vector2d sigma = Eigen::Vector2d::Zero();
  VirtualControl control;
  FlatInputs inputs;
  DisturbanceSample disturbance;
  FlatDisturbance varpi;
  bool fault = false;
};

struct SimTrace {
  std::string scenario_id;
  std::string controller_label;
  double dt = 0.0;
  Limits limits;
  std::vector<TraceRow> rows;

  std::size_t fault_count() const;
  double fault_fraction() const;
};

/// Owns the state of one run. Each call to step() records the row for the
/// current sample and advances the plant by dt.
class Simulator {
 public:
  Simulator(const Scenario& scenario, const NamedController& controller);

  const TraceRow& step();

  double time() const { return static_cast<double>(k_) * scenario_.dt; }
  const Pose& pose() const { return pose_; }
  const SimTrace& trace() const { return trace_; }
  SimTrace take_trace() { return std::move(trace_); }

 private:
  Scenario scenario_;
  control::Controller controller_;
  std::size_t k_ = 0;
  Pose pose_;
  BodyTwist applied_;
  double v_cmd_ = 0.0;
  FlatInputs inputs_;
  VirtualControl control_;
  control::ControllerOutput last_output_;
  SimTrace trace_;
};

/// Classical RK4 step of the disturbed kinematics with the twist held over dt.
Pose integrate_pose(const Pose& p, const BodyTwist& twist, const DisturbanceSpec& disturbance, double t, double dt);

/// Runs scenario.duration / dt steps (plus the initial row).
SimTrace run(const Scenario& scenario, const NamedController& controller);
SimTrace run(const Scenario& scenario);

}  // namespace wmr
