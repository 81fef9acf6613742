#include "wmr/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "wmr/errors.hpp"

namespace wmr {

BodyTwist saturate(const BodyTwist& t, const Limits& limits)
{
  return {std::clamp(t.v, -limits.v_max, limits.v_max), std::clamp(t.w, -limits.w_max, limits.w_max)};
}

void Scenario::validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ScenarioInvalid("dt", "must be > 0");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ScenarioInvalid("duration", "must be > 0");
  }
  if (control_decimation < 1) {
    throw ScenarioInvalid("control_decimation", "must be >= 1");
  }
  if (!(limits.v_max > 0.0)) {
    throw ScenarioInvalid("limits.v_max", "must be > 0");
  }
  if (!(limits.w_max > 0.0)) {
    throw ScenarioInvalid("limits.w_max", "must be > 0");
  }
  if (!geometry.valid()) {
    throw ScenarioInvalid("geometry", "wheel radius and separation must be > 0");
  }
  if (!std::isfinite(initial_pose.x) || !std::isfinite(initial_pose.y) || !std::isfinite(initial_pose.theta)) {
    throw ScenarioInvalid("initial", "pose must be finite");
  }
  if (!(std::abs(initial_v) >= kMinSpeed)) {
    throw ScenarioInvalid("initial.v", "commanded speed must be at least the singularity guard");
  }
  if (std::abs(initial_v) > limits.v_max) {
    throw ScenarioInvalid("initial.v", "exceeds v_max");
  }
  trajectory.validate();
  auto check = [](const NamedController& c, const std::string& where) {
    try {
      control::validate(c.config);
    } catch (const ScenarioInvalid& e) {
      const std::string msg = e.what();
      throw ScenarioInvalid(where + "." + e.field(), msg.substr(e.field().size() + 2));
    }
  };
  check(controller, "controller");
  if (baseline) {
    check(*baseline, "baseline");
  }
  disturbance.validate();
}

void Scenario::start_on_reference()
{
  const RobotState s = state_on_reference(trajectory, 0.0);
  initial_pose = s.pose;
  initial_v = s.twist.v;
}

std::size_t Scenario::step_count() const
{
  return static_cast<std::size_t>(std::llround(duration / dt));
}

std::size_t SimTrace::fault_count() const
{
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TraceRow& r) { return r.fault; }));
}

double SimTrace::fault_fraction() const
{
  return rows.empty() ? 0.0 : static_cast<double>(fault_count()) / static_cast<double>(rows.size());
}

Pose integrate_pose(const Pose& p, const BodyTwist& twist, const DisturbanceSpec& disturbance, double t, double dt)
{
  auto f = [&](const Pose& q, double tq) { return pose_derivative(q, twist, disturbance_at(disturbance, tq)); };
  auto shifted = [](const Pose& q, const PoseDerivative& d, double h) {
    return Pose{q.x + h * d.x_dot, q.y + h * d.y_dot, q.theta + h * d.theta_dot};
  };
  const PoseDerivative k1 = f(p, t);
  const PoseDerivative k2 = f(shifted(p, k1, dt / 2.0), t + dt / 2.0);
  const PoseDerivative k3 = f(shifted(p, k2, dt / 2.0), t + dt / 2.0);
  const PoseDerivative k4 = f(shifted(p, k3, dt), t + dt);
  return {p.x + dt / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot),
          p.y + dt / 6.0 * (k1.y_dot + 2.0 * k2.y_dot + 2.0 * k3.y_dot + k4.y_dot),
          p.theta + dt / 6.0 * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot)};
}

Simulator::Simulator(const Scenario& scenario, const NamedController& controller)
    : scenario_(scenario), controller_(controller.config)
{
  scenario_.validate();
  scenario_.disturbance.realize(scenario_.seed);
  pose_ = scenario_.initial_pose;
  v_cmd_ = scenario_.initial_v;
  applied_ = saturate({v_cmd_, 0.0}, scenario_.limits);
  trace_.scenario_id = scenario_.id;
  trace_.controller_label = controller.label;
  trace_.dt = scenario_.dt;
  trace_.limits = scenario_.limits;
  trace_.rows.reserve(scenario_.step_count() + 1);
}

const TraceRow& Simulator::step()
{
  const double dt = scenario_.dt;
  const double t = time();
  TraceRow row;
  row.t = t;
  row.pose = pose_;

  row.desired = eval(scenario_.trajectory, t);
  row.disturbance = disturbance_at(scenario_.disturbance, t);
  // Measured flat velocity is the true pose rate, disturbance included.
  row.actual = flat_from_state(pose_, applied_, inputs_);
  row.actual.gamma_dot += Eigen::Vector2d{row.disturbance.d_x, row.disturbance.d_y};
  row.varpi = disturbance_pushforward(row.disturbance, pose_.theta, applied_.v);
  row.actual.gamma_ddot += Eigen::Vector2d{row.varpi.varpi_x, row.varpi.varpi_y};

  row.e = row.actual.gamma - row.desired.gamma;
  row.e_dot = row.actual.gamma_dot - row.desired.gamma_dot;

  const bool control_tick = k_ % static_cast<std::size_t>(scenario_.control_decimation) == 0;
  if (control_tick) {
    const control::TrackingError err{{row.e.x(), row.e_dot.x()}, {row.e.y(), row.e_dot.y()}};
    last_output_ = controller_.step(err, row.desired, dt * scenario_.control_decimation);
    control_ = last_output_.control;
    try {
      inputs_ = virtual_to_inputs(control_, pose_.theta, applied_.v);
    } catch (const SingularFlatPoint&) {
      row.fault = true;  // hold the previous flat inputs
    }
  }
  row.s = last_output_.s;
  row.sigma = last_output_.sigma;
  row.control = control_;
  row.inputs = inputs_;

  // Speed integrator clamped to the actuator box (anti-windup).
  v_cmd_ = std::clamp(v_cmd_ + inputs_.u_n1 * dt, -scenario_.limits.v_max, scenario_.limits.v_max);
  row.commanded = {v_cmd_, inputs_.u_n2};
  row.saturated = saturate(row.commanded, scenario_.limits);
  applied_ = row.saturated;

  trace_.rows.push_back(row);
  pose_ = integrate_pose(pose_, applied_, scenario_.disturbance, t, dt);
  ++k_;
  return trace_.rows.back();
}

SimTrace run(const Scenario& scenario, const NamedController& controller)
{
  Simulator sim(scenario, controller);
  const std::size_t steps = scenario.step_count();
  for (std::size_t k = 0; k <= steps; ++k) {
    sim.step();
  }
  return sim.take_trace();
}

SimTrace run(const Scenario& scenario) { return run(scenario, scenario.controller); }

}  // namespace wmr
