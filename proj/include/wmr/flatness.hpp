#pragma once

// Flat-output maps for the differential-drive robot. With the flat output
// Gamma = (x, y), the kinematics become two decoupled double integrators
// once the new inputs (u_n1, u_n2) = (v', theta') are chosen as N^-1 * vc.

#include <Eigen/Core>

#include "wmr/model.hpp"

namespace wmr {

/// Singularity guard on every N^-1 path [m/s].
inline constexpr double kMinSpeed = 0.01;

struct FlatPoint {
  Eigen::Vector2d gamma = Eigen::Vector2d::Zero();       // (Gamma_11, Gamma_21)
  Eigen::Vector2d gamma_dot = Eigen::Vector2d::Zero();   // (Gamma_12, Gamma_22)
  Eigen::Vector2d gamma_ddot = Eigen::Vector2d::Zero();
};

/// Flat-space acceleration command (v_x, v_y).
struct VirtualControl {
  double v_x = 0.0;
  double v_y = 0.0;

  Eigen::Vector2d vec() const { return {v_x, v_y}; }
};

/// u_n1 = v' (translational acceleration), u_n2 = theta' (= w).
struct FlatInputs {
  double u_n1 = 0.0;
  double u_n2 = 0.0;
};

struct FlatDisturbance {
  double varpi_x = 0.0;
  double varpi_y = 0.0;
};

struct RobotState {
  Pose pose;
  BodyTwist twist;
};

FlatPoint flat_from_state(const Pose& p, const BodyTwist& t, const FlatInputs& u);

/// Inverse flat map. Heading uses the four-quadrant arctangent.
/// Throws SingularFlatPoint when |gamma_dot| < v_min.
RobotState state_from_flat(const FlatPoint& f, double v_min = kMinSpeed);

/// N(theta, v) = [[cos, -v sin], [sin, v cos]]; det N = v.
Eigen::Matrix2d input_matrix(double theta, double v);

/// (u_n1, u_n2) = N^-1 (v_x, v_y). Throws SingularFlatPoint when |v| < v_min.
FlatInputs virtual_to_inputs(const VirtualControl& vc, double theta, double v, double v_min = kMinSpeed);

/// Pose-rate disturbance seen in flat space:
/// varpi_x = d_x' - v d_theta sin(theta), varpi_y = d_y' + v d_theta cos(theta).
FlatDisturbance disturbance_pushforward(const DisturbanceSample& d, double theta, double v);

/// Dynamically extended unicycle (x, y, theta, v) driven by flat-space
/// acceleration through N^-1. Integrating this reproduces Gamma'' = vc.
struct ExtendedState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
};

ExtendedState extended_derivative(const ExtendedState& s, const VirtualControl& vc);

}  // namespace wmr
