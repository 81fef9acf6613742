#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "wmr/controllers.hpp"
#include "wmr/errors.hpp"

using namespace wmr;
using namespace wmr::control;

namespace {

FlatPoint reference(double vx, double vy, double ax, double ay)
{
  FlatPoint f;
  f.gamma_dot = {vx, vy};
  f.gamma_ddot = {ax, ay};
  return f;
}

SlidingState negated(const SlidingState& s)
{
  auto neg = [](const AxisSlidingState& a) {
    return AxisSlidingState{-a.s_integral, -a.integrand, -a.s, -a.s_dot, -a.sigma};
  };
  return {neg(s.x), neg(s.y)};
}

std::string field_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const ScenarioInvalid& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(SignedPower, Examples)
{
  EXPECT_EQ(signed_power(0.0, 0.95), 0.0);
  EXPECT_DOUBLE_EQ(signed_power(-4.0, 0.5), -2.0);
  // 1.5^1.28 = exp(1.28 ln 1.5) = exp(0.518995...) = 1.68039...
  EXPECT_NEAR(signed_power(1.5, 1.28), std::exp(1.28 * std::log(1.5)), 1e-15);
  EXPECT_NEAR(signed_power(1.5, 1.28), 1.6804, 1e-4);
  EXPECT_EQ(sign(0.0), 0.0);
  EXPECT_EQ(sign(-0.0), 0.0);
  EXPECT_EQ(sign(-3.0), -1.0);
}

TEST(ItsmSurface, ZeroErrorHistory)
{
  const AxisGains g;
  AxisSlidingState st;
  for (int i = 0; i < 100; ++i) {
    st = itsm_surface_step({0.0, 0.0}, st, g, 0.01);
    EXPECT_EQ(st.s, 0.0);
    EXPECT_EQ(st.s_dot, 0.0);
    EXPECT_EQ(st.sigma, 0.0);
  }
}

TEST(ItsmSurface, OneStepSubstitution)
{
  const AxisGains g;  // kappa1 = 3, kappa2 = 0.1, phi = 0.95
  AxisSlidingState st = itsm_surface_step({1.0, 0.0}, {}, g, 0.01);
  EXPECT_DOUBLE_EQ(st.s, 3.0);
  EXPECT_DOUBLE_EQ(st.s_dot, 0.1);

  st = itsm_surface_step({-1.0, 0.5}, {}, g, 0.01);
  EXPECT_DOUBLE_EQ(st.s, -3.0);
  EXPECT_DOUBLE_EQ(st.s_dot, 1.5 - 0.1);
}

TEST(ItsmSurface, IntegralIsExplicitEuler)
{
  const AxisGains g;
  const double dt = 0.02;
  AxisSlidingState st;
  double integral = 0.0;
  double prev_integrand = 0.0;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const AxisError e{u(rng), u(rng)};
    st = itsm_surface_step(e, st, g, dt);
    integral += prev_integrand * dt;
    prev_integrand = std::copysign(std::pow(std::abs(e.e), g.phi), e.e);
    EXPECT_NEAR(st.s_integral, integral, 1e-12);
    EXPECT_NEAR(st.s, g.kappa1 * e.e + g.kappa2 * integral, 1e-12);
    EXPECT_NEAR(st.sigma, hyperplane_sigma(st.s, st.s_dot, g), 1e-12);
  }
}

TEST(HyperplaneSigma, Examples)
{
  const AxisGains g;
  EXPECT_EQ(hyperplane_sigma(0.0, 0.0, g), 0.0);
  EXPECT_DOUBLE_EQ(hyperplane_sigma(1.0, 1.0, g), 2.14);
  EXPECT_DOUBLE_EQ(hyperplane_sigma(0.0, -1.0, g), -1.14);
}

TEST(EquivalentControl, PaperMode)
{
  const AxisGains g;
  EXPECT_EQ(equivalent_control({0, 0}, 0.0, 0.0, {}, g, EquivalentMode::paper), 0.0);
  EXPECT_NEAR(equivalent_control({0, 0}, 0.3, 0.0, {}, g, EquivalentMode::paper), 0.1, 1e-15);
}

TEST(EquivalentControl, DerivedModeAtRest)
{
  const AxisGains g;
  EXPECT_EQ(equivalent_control({0, 0}, 0.0, 0.5, {}, g, EquivalentMode::derived), 0.5);
}

TEST(EquivalentControl, DerivedModeCancelsManifoldDrift)
{
  // With v = v_eq and no disturbance, a forward-difference of sigma along the
  // exact double-integrator flow should vanish to first order.
  const AxisGains g;
  const double e = 0.3, e_dot = -0.1, integral = 0.2, ref_ddot = 0.05, h = 1e-6;
  AxisSlidingState st;
  st.s_integral = integral;
  st.integrand = std::copysign(std::pow(std::abs(e), g.phi), e);
  st.s = g.kappa1 * e + g.kappa2 * integral;
  st.s_dot = g.kappa1 * e_dot + g.kappa2 * st.integrand;
  st.sigma = hyperplane_sigma(st.s, st.s_dot, g);
  const double v = equivalent_control({e, e_dot}, 0.0, ref_ddot, st, g, EquivalentMode::derived);
  const double e_ddot = v - ref_ddot;

  auto sigma_at = [&](double dt) {
    const double ee = e + e_dot * dt + 0.5 * e_ddot * dt * dt;
    const double ed = e_dot + e_ddot * dt;
    const double integ = integral + (std::copysign(std::pow(std::abs(e), g.phi), e)) * dt;
    const double s = g.kappa1 * ee + g.kappa2 * integ;
    const double sd = g.kappa1 * ed + g.kappa2 * std::copysign(std::pow(std::abs(ee), g.phi), ee);
    return hyperplane_sigma(s, sd, g);
  };
  const double sigma_rate = (sigma_at(h) - sigma_at(-h)) / (2 * h);
  EXPECT_NEAR(sigma_rate, 0.0, 1e-7);
}

TEST(SwitchingControl, Examples)
{
  const AxisGains g;
  const Chattering sign_mode;
  EXPECT_EQ(switching_control(0.0, g, sign_mode), 0.0);
  EXPECT_NEAR(switching_control(1.0, g, sign_mode), -0.02, 1e-15);
  EXPECT_NEAR(switching_control(-1.0, g, sign_mode), 0.02, 1e-15);
}

TEST(SwitchingControl, BoundaryLayerIsLinearInside)
{
  Chattering bl{Chattering::Kind::boundary_layer, 0.1};
  EXPECT_DOUBLE_EQ(bl.apply(0.05), 0.5);
  EXPECT_DOUBLE_EQ(bl.apply(-0.2), -1.0);
  EXPECT_EQ(bl.apply(0.0), 0.0);
  bl.width = 0.0;
  EXPECT_THROW(bl.validate(), ScenarioInvalid);
}

TEST(InhsmcStep, ZeroErrorZeroReference)
{
  const InhsmcOutput out =
      inhsmc_step({}, reference(0, 0, 0, 0), {}, GainSet{}, 0.01, EquivalentMode::paper, Chattering{});
  EXPECT_EQ(out.control.v_x, 0.0);
  EXPECT_EQ(out.control.v_y, 0.0);
}

TEST(InhsmcStep, HandComposedPaperMode)
{
  const double ref_dot = 0.15;
  TrackingError err;
  err.x = {1.0, 0.0};
  const InhsmcOutput out =
      inhsmc_step(err, reference(ref_dot, 0, 0, 0), {}, GainSet{}, 0.01, EquivalentMode::paper, Chattering{});
  const double sigma = 3.0 + 1.14 * std::pow(0.1, 1.28);
  EXPECT_NEAR(out.state.x.sigma, sigma, 1e-15);
  EXPECT_NEAR(out.v_eq.x(), (ref_dot - 0.1) / 3.0, 1e-15);
  EXPECT_NEAR(out.v_sw.x(), -(0.04 * sigma + 0.02) / 3.0, 1e-15);
  EXPECT_NEAR(out.control.v_x, out.v_eq.x() + out.v_sw.x(), 1e-16);
  EXPECT_EQ(out.control.v_y, 0.0);
}

TEST(InhsmcStep, ReplayIsBitIdentical)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  SlidingState state;
  for (int k = 0; k < 50; ++k) {
    const TrackingError err{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const FlatPoint ref = reference(u(rng), u(rng), u(rng), u(rng));
    const InhsmcOutput a = inhsmc_step(err, ref, state, GainSet{}, 0.01, EquivalentMode::derived, Chattering{});
    const InhsmcOutput b = inhsmc_step(err, ref, state, GainSet{}, 0.01, EquivalentMode::derived, Chattering{});
    EXPECT_EQ(a.control.v_x, b.control.v_x);
    EXPECT_EQ(a.control.v_y, b.control.v_y);
    state = a.state;
  }
}

TEST(InhsmcStep, OddSymmetryBothModes)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (EquivalentMode mode : {EquivalentMode::paper, EquivalentMode::derived}) {
    for (auto kind : {Chattering::Kind::sign, Chattering::Kind::boundary_layer}) {
      for (int i = 0; i < 200; ++i) {
        const TrackingError err{{u(rng), u(rng)}, {u(rng), u(rng)}};
        const TrackingError neg{{-err.x.e, -err.x.e_dot}, {-err.y.e, -err.y.e_dot}};
        SlidingState state;
        state.x.s_integral = u(rng);
        state.x.integrand = u(rng);
        state.y.s_integral = u(rng);
        state.y.integrand = u(rng);
        const FlatPoint ref = reference(u(rng), u(rng), u(rng), u(rng));
        const FlatPoint ref_neg = reference(-ref.gamma_dot.x(), -ref.gamma_dot.y(), -ref.gamma_ddot.x(),
                                            -ref.gamma_ddot.y());
        const Chattering ch{kind, 0.05};
        const InhsmcOutput a = inhsmc_step(err, ref, state, GainSet{}, 0.01, mode, ch);
        const InhsmcOutput b = inhsmc_step(neg, ref_neg, negated(state), GainSet{}, 0.01, mode, ch);
        EXPECT_EQ(a.control.v_x, -b.control.v_x);
        EXPECT_EQ(a.control.v_y, -b.control.v_y);
      }
    }
  }
}

TEST(FbsmcStep, Examples)
{
  EXPECT_EQ(fbsmc_step({}, reference(0, 0, 0, 0), FbsmcParams{}, 0.01, Chattering{}).control.v_x, 0.0);

  TrackingError err;
  err.x = {1.0, 0.0};
  const FbsmcOutput out = fbsmc_step(err, reference(0, 0, 0, 0), {1.0, 0.5, 0.1}, 0.01, Chattering{});
  EXPECT_NEAR(out.control.v_x, -0.6, 1e-15);
  EXPECT_EQ(out.surface.x(), 1.0);
}

TEST(FbsmcStep, OddSymmetry)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const TrackingError err{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const TrackingError neg{{-err.x.e, -err.x.e_dot}, {-err.y.e, -err.y.e_dot}};
    const FlatPoint ref = reference(0, 0, u(rng), u(rng));
    const FlatPoint ref_neg = reference(0, 0, -ref.gamma_ddot.x(), -ref.gamma_ddot.y());
    const FbsmcOutput a = fbsmc_step(err, ref, FbsmcParams{}, 0.01, Chattering{});
    const FbsmcOutput b = fbsmc_step(neg, ref_neg, FbsmcParams{}, 0.01, Chattering{});
    EXPECT_EQ(a.control.v_x, -b.control.v_x);
    EXPECT_EQ(a.control.v_y, -b.control.v_y);
  }
}

TEST(SettlingTime, ClosedForms)
{
  const AxisGains g;
  EXPECT_EQ(settling_time_z(0.0, g), 0.0);
  EXPECT_NEAR(settling_time_z(1.0, g), 1.14 * 1.28 / 0.28, 1e-12);
  EXPECT_NEAR(settling_time_z(1.0, g), 5.2114, 1e-4);
  EXPECT_NEAR(settling_time_z(-0.5, g), 5.2114 * std::pow(0.5, 0.28), 1e-4);
  EXPECT_NEAR(settling_time_z(0.5, g), 4.2932, 2e-3);

  EXPECT_EQ(settling_time_e(0.0, g), 0.0);
  EXPECT_NEAR(settling_time_e(1.0, g), 600.0, 1e-9);
  EXPECT_NEAR(settling_time_e(0.1, g), 600.0 * std::pow(0.1, 0.05), 1e-9);
  EXPECT_NEAR(settling_time_e(0.1, g), 534.77, 0.05);
}

TEST(SettlingTime, StrictlyIncreasing)
{
  const AxisGains g;
  double prev_z = 0.0, prev_e = 0.0;
  for (double x = 1e-3; x < 10.0; x *= 1.3) {
    EXPECT_GT(settling_time_z(x, g), prev_z);
    EXPECT_GT(settling_time_e(-x, g), prev_e);
    prev_z = settling_time_z(-x, g);
    prev_e = settling_time_e(x, g);
  }
}

TEST(ReachingBound, Examples)
{
  const AxisGains g;
  EXPECT_TRUE(reaching_bound_holds(0.0, g));
  EXPECT_TRUE(reaching_bound_holds(0.005, g));  // 3 * 0.005 = 0.015 <= 0.02
  EXPECT_FALSE(reaching_bound_holds(0.01, g));  // 0.03 > 0.02
}

TEST(Gains, ValidationNamesField)
{
  AxisGains g;
  g.beta = 2.5;
  EXPECT_EQ(field_of([&] { g.validate("gains.x"); }), "gains.x.beta");
  g.beta = 2.0;
  EXPECT_EQ(field_of([&] { g.validate("gains.x"); }), "gains.x.beta");
  g = {};
  g.phi = 1.0;
  EXPECT_EQ(field_of([&] { g.validate("gains.y"); }), "gains.y.phi");
  g = {};
  g.kappa1 = 0.0;
  EXPECT_EQ(field_of([&] { g.validate(); }), "gains.kappa1");
  g = {};
  g.mu = std::nan("");
  EXPECT_EQ(field_of([&] { g.validate(); }), "gains.mu");
  FbsmcParams p;
  p.lambda = -1.0;
  EXPECT_EQ(field_of([&] { p.validate(); }), "lambda");
  EXPECT_EQ(field_of([&] { p.validate("baseline"); }), "baseline.lambda");
  EXPECT_NO_THROW(GainSet{}.validate());
}

TEST(Controller, SigmaConsistentAfterEveryStep)
{
  Controller c{InhsmcConfig{}};
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 500; ++k) {
    const TrackingError err{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const ControllerOutput out = c.step(err, reference(0.1, 0, 0, 0.01), 0.01);
    const auto& st = c.sliding_state();
    const AxisGains g;
    EXPECT_NEAR(hyperplane_sigma(st.x.s, st.x.s_dot, g), out.sigma.x(), 1e-12);
    EXPECT_NEAR(hyperplane_sigma(st.y.s, st.y.s_dot, g), out.sigma.y(), 1e-12);
  }
}
