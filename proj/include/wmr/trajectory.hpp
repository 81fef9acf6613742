#pragma once

#include <Eigen/Core>

#include "wmr/flatness.hpp"

namespace wmr {

/// Analytic C2 reference curves in flat space.
///
/// circle:      Gamma_d = center + scale (cos a, sin a),            a = rate tau + phase
/// lemniscate:  Gamma_d = center + scale (cos a, sin a cos a)       (Gerono)
/// line:        start at `center`, heading `phase`, speed ramps from
///              `initial_speed` to `speed` over `ramp_time` (quintic), then cruises
///
/// with tau = t - start_time.
struct TrajectorySpec {
  enum class Kind { circle, lemniscate, line_segment_smoothed };

  Kind kind = Kind::circle;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double scale = 1.0;
  double angular_rate = 0.15;
  double phase = 0.0;
  double start_time = 0.0;
  // line_segment_smoothed only
  double speed = 0.15;
  double initial_speed = 0.05;
  double ramp_time = 5.0;

  /// Throws ScenarioInvalid; for periodic curves also checks that the
  /// reference speed never drops below kMinSpeed (dense sampling).
  void validate() const;
};

FlatPoint eval(const TrajectorySpec& spec, double t);

/// Pose and speed that start the robot exactly on the reference at time t.
RobotState state_on_reference(const TrajectorySpec& spec, double t);

const char* to_string(TrajectorySpec::Kind kind);

}  // namespace wmr
