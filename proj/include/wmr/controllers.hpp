#pragma once

// Integral nonlinear hyperplane sliding mode control (INH-SMC) in flat space,
// plus a linear-surface flatness-based SMC used as the comparison baseline.
//
// Per axis i in {x, y}:
//   s_i     = k1 e + k2 * int |e|^phi sign(e) dt
//   sigma_i = s_i + mu |s_i'|^beta sign(s_i')
//   v_i     = v_eq,i + v_sw,i,   v_sw,i = -(u1 sigma + u2 sw(sigma)) / k1

#include <string>
#include <variant>

#include <Eigen/Core>

#include "wmr/flatness.hpp"

namespace wmr::control {

/// sign with sign(0) = 0.
double sign(double x);

/// |x|^p sign(x); zero at zero for every p > 0.
double signed_power(double x, double p);

struct AxisGains {
  double kappa1 = 3.0;
  double kappa2 = 0.1;
  double phi = 0.95;
  double mu = 1.14;
  double beta = 1.28;
  double upsilon1 = 0.04;
  double upsilon2 = 0.02;

  /// Throws ScenarioInvalid naming the field, prefixed by `prefix`.
  void validate(const std::string& prefix = "gains") const;
};

/// Defaults are the hardware-tuned values on both axes.
struct GainSet {
  AxisGains x;
  AxisGains y;

  void validate() const;
};

enum class EquivalentMode {
  paper,    // (1/k1)(Gamma_d' - k2 |e|^phi sign e), taken literally
  derived,  // cancels the double-integrator so sigma' matches the reaching law
};

struct Chattering {
  enum class Kind { sign, boundary_layer };
  Kind kind = Kind::sign;
  double width = 0.01;  // boundary-layer half width, used only in boundary_layer mode

  double apply(double sigma) const;
  void validate() const;
};

struct AxisError {
  double e = 0.0;
  double e_dot = 0.0;
};

struct TrackingError {
  AxisError x;
  AxisError y;
};

struct AxisSlidingState {
  double s_integral = 0.0;  // integral term used in s at this sample
  double integrand = 0.0;   // |e|^phi sign(e) at this sample, accumulated on the next step
  double s = 0.0;
  double s_dot = 0.0;
  double sigma = 0.0;
};

struct SlidingState {
  AxisSlidingState x;
  AxisSlidingState y;
};

/// Clamp on |e| inside the |e|^(phi-1) factor of the derived equivalent control.
inline constexpr double kErrorClamp = 1e-6;

/// Advances the integral terminal surface one control period (explicit Euler
/// on the integral: the sample at t_k contributes from t_{k+1} onward).
AxisSlidingState itsm_surface_step(const AxisError& err, const AxisSlidingState& prev, const AxisGains& g,
                                   double dt);

double hyperplane_sigma(double s, double s_dot, const AxisGains& g);

/// `ref_dot` and `ref_ddot` are the reference velocity and acceleration on this axis.
double equivalent_control(const AxisError& err, double ref_dot, double ref_ddot, const AxisSlidingState& state,
                          const AxisGains& g, EquivalentMode mode);

double switching_control(double sigma, const AxisGains& g, const Chattering& chattering);

struct InhsmcOutput {
  VirtualControl control;
  SlidingState state;
  Eigen::Vector2d v_eq = Eigen::Vector2d::Zero();
  Eigen::Vector2d v_sw = Eigen::Vector2d::Zero();
};

InhsmcOutput inhsmc_step(const TrackingError& err, const FlatPoint& ref, const SlidingState& state, const GainSet& g,
                         double dt, EquivalentMode mode, const Chattering& chattering);

struct FbsmcParams {
  double lambda = 2.0;
  double eta = 0.5;
  double k = 0.05;

  void validate(const std::string& prefix = "") const;
};

struct FbsmcOutput {
  VirtualControl control;
  Eigen::Vector2d surface = Eigen::Vector2d::Zero();  // s_lin = e' + lambda e
};

/// Linear-surface SMC on the double integrator:
/// v = Gamma_d'' - lambda e' - eta s - k sw(s), s = e' + lambda e.
FbsmcOutput fbsmc_step(const TrackingError& err, const FlatPoint& ref, const FbsmcParams& p, double dt,
                       const Chattering& chattering);

/// Time for z' = -(1/(mu beta)) |z|^(2-beta) sign z to reach zero from z0.
double settling_time_z(double z0, const AxisGains& g);

/// Time for e' = -(k2/k1) |e|^phi sign e to reach zero from e0.
double settling_time_e(double e0, const AxisGains& g);

/// True iff k1 * bound <= upsilon2, the dominance condition for reaching.
bool reaching_bound_holds(double varpi_bound, const AxisGains& g);

// Runtime controller used by the simulator.

struct InhsmcConfig {
  GainSet gains;
  EquivalentMode mode = EquivalentMode::derived;
  Chattering chattering;
};

struct FbsmcConfig {
  FbsmcParams params;
  Chattering chattering;
};

using ControllerConfig = std::variant<InhsmcConfig, FbsmcConfig>;

void validate(const ControllerConfig& config);

struct ControllerOutput {
  VirtualControl control;
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  Eigen::Vector2d sigma = Eigen::Vector2d::Zero();
};

class Controller {
 public:
  explicit Controller(ControllerConfig config);

  ControllerOutput step(const TrackingError& err, const FlatPoint& ref, double dt);

  const ControllerConfig& config() const { return config_; }
  const SlidingState& sliding_state() const { return state_; }

 private:
  ControllerConfig config_;
  SlidingState state_;
};

}  // namespace wmr::control
