#include "wmr/flatness.hpp"

#include <cmath>

#include "wmr/errors.hpp"

namespace wmr {

FlatPoint flat_from_state(const Pose& p, const BodyTwist& t, const FlatInputs& u)
{
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  FlatPoint f;
  f.gamma = {p.x, p.y};
  f.gamma_dot = {t.v * c, t.v * s};
  f.gamma_ddot = {u.u_n1 * c - u.u_n2 * t.v * s, u.u_n1 * s + u.u_n2 * t.v * c};
  return f;
}

RobotState state_from_flat(const FlatPoint& f, double v_min)
{
  const double speed_sq = f.gamma_dot.squaredNorm();
  const double speed = std::sqrt(speed_sq);
  if (speed < v_min) {
    throw SingularFlatPoint(speed);
  }
  const auto& gd = f.gamma_dot;
  const auto& gdd = f.gamma_ddot;
  RobotState out;
  out.pose = {f.gamma.x(), f.gamma.y(), std::atan2(gd.y(), gd.x())};
  out.twist = {speed, (gd.x() * gdd.y() - gdd.x() * gd.y()) / speed_sq};
  return out;
}

Eigen::Matrix2d input_matrix(double theta, double v)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d n;
  n << c, -v * s, s, v * c;
  return n;
}

FlatInputs virtual_to_inputs(const VirtualControl& vc, double theta, double v, double v_min)
{
  if (!(std::abs(v) >= v_min)) {
    throw SingularFlatPoint(std::abs(v));
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {vc.v_x * c + vc.v_y * s, (-vc.v_x * s + vc.v_y * c) / v};
}

FlatDisturbance disturbance_pushforward(const DisturbanceSample& d, double theta, double v)
{
  return {d.d_x_dot - v * d.d_theta * std::sin(theta), d.d_y_dot + v * d.d_theta * std::cos(theta)};
}

ExtendedState extended_derivative(const ExtendedState& s, const VirtualControl& vc)
{
  const FlatInputs u = virtual_to_inputs(vc, s.theta, s.v);
  return {s.v * std::cos(s.theta), s.v * std::sin(s.theta), u.u_n2, u.u_n1};
}

}  // namespace wmr
