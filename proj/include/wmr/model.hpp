#pragma once

// Differential-drive kinematics: wheel <-> body velocity maps and the
// (optionally disturbed) pose derivative.

namespace wmr {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // unwrapped
};

struct PoseDerivative {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double theta_dot = 0.0;
};

struct BodyTwist {
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s
};

struct WheelSpeeds {
  double u_l = 0.0;  // rad/s
  double u_r = 0.0;  // rad/s
};

struct RobotGeometry {
  double r = 0.033;  // wheel radius [m]
  double D = 0.160;  // wheel separation [m]

  bool valid() const { return r > 0.0 && D > 0.0; }
};

/// Additive pose-rate disturbance and its time derivative.
struct DisturbanceSample {
  double d_x = 0.0;
  double d_y = 0.0;
  double d_theta = 0.0;
  double d_x_dot = 0.0;
  double d_y_dot = 0.0;
  double d_theta_dot = 0.0;

  double inf_norm() const;
};

BodyTwist wheels_to_twist(const WheelSpeeds& u, const RobotGeometry& g);
WheelSpeeds twist_to_wheels(const BodyTwist& t, const RobotGeometry& g);

/// Unicycle kinematics plus additive disturbance:
/// x' = v cos(theta) + d_x, y' = v sin(theta) + d_y, theta' = w + d_theta.
PoseDerivative pose_derivative(const Pose& p, const BodyTwist& t, const DisturbanceSample& d = {});

/// Wraps an angle to (-pi, pi]. Only used for display.
double wrap_angle(double theta);

}  // namespace wmr
