#pragma once

// Numerical checks of the finite-time convergence claims: scalar ODE oracles
// against the closed-form settling times, and a randomized reaching test of
// the sliding manifold on the flat double-integrator plant.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmr/controllers.hpp"

namespace wmr::verify {

struct ScalarSettling {
  double arrival = 0.0;    // time at which |x| falls below floor * |x0| (numerical zero)
  double threshold = 0.0;  // first time |x| < threshold_level
  std::size_t steps = 0;
};

/// Integrates x' = rhs(x) with classical RK4 using a step scaled to the local
/// time constant, h = c |x / rhs(x)|, so the run costs O(log(1/floor)/c) steps
/// regardless of how long the settling time is.
ScalarSettling integrate_to_zero(const std::function<double(double)>& rhs, double x0, double threshold_level,
                                 double floor = 1e-100, double step_fraction = 0.02);

struct SettlingCheck {
  std::string variable;  // "z" or "e"
  control::AxisGains gains;
  double x0 = 0.0;
  double predicted = 0.0;
  double arrival = 0.0;
  double threshold_level = 0.0;
  double threshold_time = 0.0;
  double relative_error = 0.0;  // |arrival - predicted| / predicted
  bool pass = false;
};

inline constexpr double kSettlingTolerance = 0.02;

/// z' = -(1/(mu beta)) |z|^(2-beta) sign z vs settling_time_z.
SettlingCheck check_settling_z(const control::AxisGains& g, double z0, double tolerance = kSettlingTolerance);

/// e' = -(k2/k1) |e|^phi sign e vs settling_time_e.
SettlingCheck check_settling_e(const control::AxisGains& g, double e0, double tolerance = kSettlingTolerance);

/// Band that sigma must enter and never leave at the given control period.
/// Calibrated at dt = 0.01 s with the hardware gains.
inline constexpr double kSigmaBand = 2e-3;

struct ReachingOptions {
  control::AxisGains gains;
  double dt = 0.01;
  double duration = 120.0;
  double bound_factor = 0.5;  // |k1 varpi| <= bound_factor * upsilon2
  double hold_time = 2.0;     // disturbance is piecewise constant over this period
  double band = kSigmaBand;
  double max_e0 = 0.5;
  double max_e_dot0 = 0.2;
  std::uint64_t seed = 1;
};

struct ReachingCheck {
  std::uint64_t seed = 0;
  double e0 = 0.0;
  double e_dot0 = 0.0;
  double varpi_bound = 0.0;
  bool bound_holds = false;
  double entry_time = -1.0;  // < 0 when never entered
  bool stayed = false;
  std::size_t sign_violations = 0;  // steps with |sigma| > band and sigma * dsigma > 0
  double max_sigma_after_entry = 0.0;
  bool pass = false;
  std::string note;
};

/// One randomized run: derived equivalent control, pure sign switching, exact
/// zero-order-hold integration of Gamma'' = v + varpi with a sinusoidal reference.
ReachingCheck check_reaching(const ReachingOptions& options);

struct VerificationReport {
  std::vector<SettlingCheck> settling;
  std::vector<ReachingCheck> reaching;
  double band = kSigmaBand;

  bool all_pass() const;
  std::string render() const;
  nlohmann::json to_json() const;
};

struct VerificationOptions {
  std::size_t reaching_runs = 20;
  std::uint64_t seed = 2024;
  double bound_factor = 0.5;
};

/// Default grid: several gain sets x initial values for both settling times,
/// plus `reaching_runs` randomized reaching runs.
VerificationReport run_verification(const VerificationOptions& options = {});

}  // namespace wmr::verify
