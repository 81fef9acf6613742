#include "wmr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wmr {

double DisturbanceSample::inf_norm() const
{
  return std::max({std::abs(d_x), std::abs(d_y), std::abs(d_theta)});
}

BodyTwist wheels_to_twist(const WheelSpeeds& u, const RobotGeometry& g)
{
  return {g.r / 2.0 * (u.u_l + u.u_r), g.r / g.D * (u.u_r - u.u_l)};
}

WheelSpeeds twist_to_wheels(const BodyTwist& t, const RobotGeometry& g)
{
  const double half_track = t.w * g.D / 2.0;
  return {(t.v - half_track) / g.r, (t.v + half_track) / g.r};
}

PoseDerivative pose_derivative(const Pose& p, const BodyTwist& t, const DisturbanceSample& d)
{
  return {t.v * std::cos(p.theta) + d.d_x, t.v * std::sin(p.theta) + d.d_y, t.w + d.d_theta};
}

double wrap_angle(double theta)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(theta + std::numbers::pi, two_pi);
  if (wrapped <= 0.0) {
    wrapped += two_pi;
  }
  return wrapped - std::numbers::pi;
}

}  // namespace wmr
