#include "wmr/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "wmr/errors.hpp"

namespace wmr::control {

namespace {

void require(bool ok, const std::string& field, const char* why)
{
  if (!ok) {
    throw ScenarioInvalid(field, why);
  }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double sign(double x)
{
  if (x > 0.0) {
    return 1.0;
  }
  if (x < 0.0) {
    return -1.0;
  }
  return 0.0;
}

double signed_power(double x, double p)
{
  if (x == 0.0) {
    return 0.0;
  }
  const double mag = std::pow(std::abs(x), p);
  return x > 0.0 ? mag : -mag;
}

void AxisGains::validate(const std::string& prefix) const
{
  require(finite_positive(kappa1), prefix + ".kappa1", "must be > 0");
  require(finite_positive(kappa2), prefix + ".kappa2", "must be > 0");
  require(phi > 0.5 && phi < 1.0, prefix + ".phi", "must lie in (0.5, 1)");
  require(finite_positive(mu), prefix + ".mu", "must be > 0");
  require(beta > 1.0 && beta < 2.0, prefix + ".beta", "must lie in (1, 2)");
  require(finite_positive(upsilon1), prefix + ".upsilon1", "must be > 0");
  require(finite_positive(upsilon2), prefix + ".upsilon2", "must be > 0");
}

void GainSet::validate() const
{
  x.validate("gains.x");
  y.validate("gains.y");
}

double Chattering::apply(double sigma) const
{
  if (kind == Kind::boundary_layer) {
    return std::clamp(sigma / width, -1.0, 1.0);
  }
  return sign(sigma);
}

void Chattering::validate() const
{
  if (kind == Kind::boundary_layer) {
    require(finite_positive(width), "chattering.width", "boundary layer width must be > 0");
  }
}

AxisSlidingState itsm_surface_step(const AxisError& err, const AxisSlidingState& prev, const AxisGains& g,
                                   double dt)
{
  AxisSlidingState next;
  next.s_integral = prev.s_integral + prev.integrand * dt;
  next.integrand = signed_power(err.e, g.phi);
  next.s = g.kappa1 * err.e + g.kappa2 * next.s_integral;
  next.s_dot = g.kappa1 * err.e_dot + g.kappa2 * next.integrand;
  next.sigma = hyperplane_sigma(next.s, next.s_dot, g);
  return next;
}

double hyperplane_sigma(double s, double s_dot, const AxisGains& g)
{
  return s + g.mu * signed_power(s_dot, g.beta);
}

double equivalent_control(const AxisError& err, double ref_dot, double ref_ddot, const AxisSlidingState& state,
                          const AxisGains& g, EquivalentMode mode)
{
  if (mode == EquivalentMode::paper) {
    return (ref_dot - g.kappa2 * signed_power(err.e, g.phi)) / g.kappa1;
  }
  // s'' = k1 (v + varpi - Gamma_d'') + k2 phi |e|^(phi-1) e'; choosing v this way
  // leaves sigma' = mu beta |s'|^(beta-1) (k1 v_sw + k1 varpi).
  const double abs_e = std::max(std::abs(err.e), kErrorClamp);
  const double integral_rate = g.kappa2 / g.kappa1 * g.phi * std::pow(abs_e, g.phi - 1.0) * err.e_dot;
  const double manifold_rate = signed_power(state.s_dot, 2.0 - g.beta) / (g.kappa1 * g.mu * g.beta);
  return ref_ddot - integral_rate - manifold_rate;
}

double switching_control(double sigma, const AxisGains& g, const Chattering& chattering)
{
  return -(g.upsilon1 * sigma + g.upsilon2 * chattering.apply(sigma)) / g.kappa1;
}

InhsmcOutput inhsmc_step(const TrackingError& err, const FlatPoint& ref, const SlidingState& state, const GainSet& g,
                         double dt, EquivalentMode mode, const Chattering& chattering)
{
  InhsmcOutput out;
  out.state.x = itsm_surface_step(err.x, state.x, g.x, dt);
  out.state.y = itsm_surface_step(err.y, state.y, g.y, dt);

  out.v_eq.x() = equivalent_control(err.x, ref.gamma_dot.x(), ref.gamma_ddot.x(), out.state.x, g.x, mode);
  out.v_eq.y() = equivalent_control(err.y, ref.gamma_dot.y(), ref.gamma_ddot.y(), out.state.y, g.y, mode);
  out.v_sw.x() = switching_control(out.state.x.sigma, g.x, chattering);
  out.v_sw.y() = switching_control(out.state.y.sigma, g.y, chattering);

  out.control = {out.v_eq.x() + out.v_sw.x(), out.v_eq.y() + out.v_sw.y()};
  return out;
}

void FbsmcParams::validate(const std::string& prefix) const
{
  const std::string head = prefix.empty() ? "" : prefix + ".";
  require(finite_positive(lambda), head + "lambda", "must be > 0");
  require(finite_positive(eta), head + "eta", "must be > 0");
  require(finite_positive(k), head + "k", "must be > 0");
}

FbsmcOutput fbsmc_step(const TrackingError& err, const FlatPoint& ref, const FbsmcParams& p, double /*dt*/,
                       const Chattering& chattering)
{
  auto axis = [&](const AxisError& a, double ref_ddot, double& surface) {
    surface = a.e_dot + p.lambda * a.e;
    return ref_ddot - p.lambda * a.e_dot - p.eta * surface - p.k * chattering.apply(surface);
  };
  FbsmcOutput out;
  out.control.v_x = axis(err.x, ref.gamma_ddot.x(), out.surface.x());
  out.control.v_y = axis(err.y, ref.gamma_ddot.y(), out.surface.y());
  return out;
}

double settling_time_z(double z0, const AxisGains& g)
{
  return g.mu * g.beta / (g.beta - 1.0) * std::pow(std::abs(z0), g.beta - 1.0);
}

double settling_time_e(double e0, const AxisGains& g)
{
  return g.kappa1 / ((1.0 - g.phi) * g.kappa2) * std::pow(std::abs(e0), 1.0 - g.phi);
}

bool reaching_bound_holds(double varpi_bound, const AxisGains& g)
{
  return g.kappa1 * varpi_bound <= g.upsilon2;
}

void validate(const ControllerConfig& config)
{
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, InhsmcConfig>) {
          c.gains.validate();
        } else {
          c.params.validate();
        }
        c.chattering.validate();
      },
      config);
}

Controller::Controller(ControllerConfig config) : config_(std::move(config))
{
  validate(config_);
}

ControllerOutput Controller::step(const TrackingError& err, const FlatPoint& ref, double dt)
{
  ControllerOutput out;
  if (const auto* inh = std::get_if<InhsmcConfig>(&config_)) {
    const InhsmcOutput r = inhsmc_step(err, ref, state_, inh->gains, dt, inh->mode, inh->chattering);
    state_ = r.state;
    out.control = r.control;
    out.s = {state_.x.s, state_.y.s};
    out.sigma = {state_.x.sigma, state_.y.sigma};
  } else {
    const auto& fb = std::get<FbsmcConfig>(config_);
    const FbsmcOutput r = fbsmc_step(err, ref, fb.params, dt, fb.chattering);
    out.control = r.control;
    out.s = r.surface;
    out.sigma = r.surface;
  }
  return out;
}

}  // namespace wmr::control
