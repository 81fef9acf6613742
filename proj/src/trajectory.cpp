#include "wmr/trajectory.hpp"

#include <cmath>
#include <numbers>

#include "wmr/errors.hpp"

namespace wmr {

namespace {

constexpr int kSpeedSamples = 4096;

// Quintic smoothstep and its antiderivative / derivative on u in [0, 1].
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_integral(double u) { return u * u * u * u * (2.5 + u * (-3.0 + u)); }
double smoothstep_rate(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

FlatPoint eval_line(const TrajectorySpec& s, double tau)
{
  const Eigen::Vector2d dir{std::cos(s.phase), std::sin(s.phase)};
  const double dv = s.speed - s.initial_speed;
  double dist = 0.0;
  double vel = 0.0;
  double acc = 0.0;
  if (tau <= 0.0) {
    dist = s.initial_speed * tau;
    vel = s.initial_speed;
  } else if (tau < s.ramp_time) {
    const double u = tau / s.ramp_time;
    dist = s.initial_speed * tau + dv * s.ramp_time * smoothstep_integral(u);
    vel = s.initial_speed + dv * smoothstep(u);
    acc = dv * smoothstep_rate(u) / s.ramp_time;
  } else {
    dist = s.initial_speed * s.ramp_time + 0.5 * dv * s.ramp_time + s.speed * (tau - s.ramp_time);
    vel = s.speed;
  }
  FlatPoint f;
  f.gamma = s.center + dist * dir;
  f.gamma_dot = vel * dir;
  f.gamma_ddot = acc * dir;
  return f;
}

}  // namespace

const char* to_string(TrajectorySpec::Kind kind)
{
  switch (kind) {
    case TrajectorySpec::Kind::circle:
      return "circle";
    case TrajectorySpec::Kind::lemniscate:
      return "lemniscate";
    case TrajectorySpec::Kind::line_segment_smoothed:
      return "line_segment_smoothed";
  }
  return "unknown";
}

void TrajectorySpec::validate() const
{
  if (!center.allFinite() || !std::isfinite(phase) || !std::isfinite(start_time)) {
    throw ScenarioInvalid("trajectory", "parameters must be finite");
  }
  if (kind == Kind::line_segment_smoothed) {
    if (!(speed > 0.0)) {
      throw ScenarioInvalid("trajectory.speed", "must be > 0");
    }
    if (!(initial_speed >= 0.0)) {
      throw ScenarioInvalid("trajectory.initial_speed", "must be >= 0");
    }
    if (!(ramp_time > 0.0)) {
      throw ScenarioInvalid("trajectory.ramp_time", "must be > 0");
    }
    return;
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ScenarioInvalid("trajectory.radius", "must be > 0");
  }
  if (angular_rate == 0.0 || !std::isfinite(angular_rate)) {
    throw ScenarioInvalid("trajectory.angular_rate", "must be nonzero");
  }
  const double period = 2.0 * std::numbers::pi / std::abs(angular_rate);
  for (int i = 0; i < kSpeedSamples; ++i) {
    const double t = start_time + period * i / kSpeedSamples;
    if (eval(*this, t).gamma_dot.norm() < kMinSpeed) {
      throw ScenarioInvalid("trajectory", "reference speed drops below the flatness singularity guard");
    }
  }
}

FlatPoint eval(const TrajectorySpec& spec, double t)
{
  const double tau = t - spec.start_time;
  if (spec.kind == TrajectorySpec::Kind::line_segment_smoothed) {
    return eval_line(spec, tau);
  }
  const double w = spec.angular_rate;
  const double a = w * tau + spec.phase;
  const double r = spec.scale;
  const double c = std::cos(a);
  const double s = std::sin(a);
  FlatPoint f;
  if (spec.kind == TrajectorySpec::Kind::circle) {
    f.gamma = spec.center + r * Eigen::Vector2d{c, s};
    f.gamma_dot = r * w * Eigen::Vector2d{-s, c};
    f.gamma_ddot = -r * w * w * Eigen::Vector2d{c, s};
  } else {
    const double c2 = std::cos(2.0 * a);
    const double s2 = std::sin(2.0 * a);
    f.gamma = spec.center + r * Eigen::Vector2d{c, 0.5 * s2};
    f.gamma_dot = r * w * Eigen::Vector2d{-s, c2};
    f.gamma_ddot = -r * w * w * Eigen::Vector2d{c, 2.0 * s2};
  }
  return f;
}

RobotState state_on_reference(const TrajectorySpec& spec, double t)
{
  return state_from_flat(eval(spec, t), 0.0);
}

}  // namespace wmr
