#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wmr/errors.hpp"
#include "wmr/trajectory.hpp"

using namespace wmr;

namespace {

TrajectorySpec circle(double radius, double rate)
{
  TrajectorySpec s;
  s.kind = TrajectorySpec::Kind::circle;
  s.scale = radius;
  s.angular_rate = rate;
  return s;
}

TrajectorySpec lemniscate()
{
  TrajectorySpec s;
  s.kind = TrajectorySpec::Kind::lemniscate;
  s.center = {0.4, -1.0};
  s.scale = 1.5;
  s.angular_rate = 0.08;
  s.phase = 0.3;
  return s;
}

TrajectorySpec line()
{
  TrajectorySpec s;
  s.kind = TrajectorySpec::Kind::line_segment_smoothed;
  s.center = {1.0, 2.0};
  s.phase = 0.6;
  s.speed = 0.18;
  s.initial_speed = 0.04;
  s.ramp_time = 4.0;
  s.start_time = 1.0;
  return s;
}

void expect_finite_differences(const TrajectorySpec& spec, double t0, double t1)
{
  const double h = 1e-5;
  for (double t = t0; t <= t1; t += 0.731) {
    const FlatPoint f = eval(spec, t);
    const FlatPoint fp = eval(spec, t + h);
    const FlatPoint fm = eval(spec, t - h);
    const Eigen::Vector2d vel = (fp.gamma - fm.gamma) / (2 * h);
    const Eigen::Vector2d acc = (fp.gamma_dot - fm.gamma_dot) / (2 * h);
    EXPECT_LT((vel - f.gamma_dot).cwiseAbs().maxCoeff(), 1e-6) << to_string(spec.kind) << " t=" << t;
    EXPECT_LT((acc - f.gamma_ddot).cwiseAbs().maxCoeff(), 1e-6) << to_string(spec.kind) << " t=" << t;
  }
}

}  // namespace

TEST(Trajectory, CircleAtStart)
{
  const FlatPoint f = eval(circle(1.0, 0.1), 0.0);
  EXPECT_NEAR(f.gamma.x(), 1.0, 1e-15);
  EXPECT_NEAR(f.gamma.y(), 0.0, 1e-15);
  EXPECT_NEAR(f.gamma_dot.x(), 0.0, 1e-15);
  EXPECT_NEAR(f.gamma_dot.y(), 0.1, 1e-15);
  EXPECT_NEAR(f.gamma_ddot.x(), -0.01, 1e-15);
  EXPECT_NEAR(f.gamma_ddot.y(), 0.0, 1e-15);
}

TEST(Trajectory, CircleConstantSpeed)
{
  for (const auto& spec : {circle(1.0, 0.15), circle(2.5, -0.05), circle(0.3, 0.7)}) {
    for (double t = -3.0; t < 200.0; t += 1.7) {
      EXPECT_NEAR(eval(spec, t).gamma_dot.norm(), spec.scale * std::abs(spec.angular_rate), 1e-14);
    }
  }
}

TEST(Trajectory, FiniteDifferences)
{
  expect_finite_differences(circle(1.0, 0.15), 0.0, 100.0);
  expect_finite_differences(lemniscate(), 0.0, 100.0);
  expect_finite_differences(line(), 0.0, 30.0);
}

TEST(Trajectory, LineCruisesAfterRamp)
{
  const TrajectorySpec s = line();
  for (double t = s.start_time + s.ramp_time; t < 60.0; t += 0.5) {
    const FlatPoint f = eval(s, t);
    EXPECT_EQ(f.gamma_ddot.x(), 0.0);
    EXPECT_EQ(f.gamma_ddot.y(), 0.0);
    EXPECT_NEAR(f.gamma_dot.norm(), s.speed, 1e-15);
  }
  // Before the start it moves at the initial speed along the heading.
  const FlatPoint f0 = eval(s, 0.0);
  EXPECT_NEAR(f0.gamma_dot.norm(), s.initial_speed, 1e-15);
  EXPECT_NEAR(std::atan2(f0.gamma_dot.y(), f0.gamma_dot.x()), s.phase, 1e-14);
}

TEST(Trajectory, LineRampIsMonotone)
{
  const TrajectorySpec s = line();
  double prev = 0.0;
  for (double t = 0.0; t < 10.0; t += 0.01) {
    const double speed = eval(s, t).gamma_dot.norm();
    EXPECT_GE(speed, prev - 1e-15);
    prev = speed;
  }
}

TEST(Trajectory, SpeedAboveGuard)
{
  for (const auto& spec : {circle(1.0, 0.15), lemniscate(), line()}) {
    EXPECT_NO_THROW(spec.validate());
    for (double t = 0.0; t < 300.0; t += 0.05) {
      EXPECT_GE(eval(spec, t).gamma_dot.norm(), kMinSpeed);
    }
  }
}

TEST(Trajectory, StateOnReferenceMatchesFlatInverse)
{
  const TrajectorySpec s = lemniscate();
  for (double t = 0.0; t < 80.0; t += 3.3) {
    const FlatPoint f = eval(s, t);
    const RobotState st = state_on_reference(s, t);
    EXPECT_NEAR(st.twist.v, f.gamma_dot.norm(), 1e-14);
    EXPECT_NEAR(st.pose.x, f.gamma.x(), 0.0);
    // Curvature identity: w = (x' y'' - y' x'') / v^2
    const double w = (f.gamma_dot.x() * f.gamma_ddot.y() - f.gamma_dot.y() * f.gamma_ddot.x()) /
                     f.gamma_dot.squaredNorm();
    EXPECT_NEAR(st.twist.w, w, 1e-12);
  }
}

TEST(Trajectory, ValidationNamesField)
{
  auto field = [](const TrajectorySpec& s) {
    try {
      s.validate();
    } catch (const ScenarioInvalid& e) {
      return e.field();
    }
    return std::string();
  };
  EXPECT_EQ(field(circle(0.0, 0.1)), "trajectory.radius");
  EXPECT_EQ(field(circle(1.0, 0.0)), "trajectory.angular_rate");
  EXPECT_EQ(field(circle(0.001, 0.1)), "trajectory");  // 1e-4 m/s, below the guard
  TrajectorySpec l = line();
  l.speed = 0.0;
  EXPECT_EQ(field(l), "trajectory.speed");
  l = line();
  l.ramp_time = -1.0;
  EXPECT_EQ(field(l), "trajectory.ramp_time");
}
