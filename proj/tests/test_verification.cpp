#include <cmath>

#include <gtest/gtest.h>

#include "wmr/controllers.hpp"
#include "wmr/verification.hpp"

using namespace wmr;
using namespace wmr::verify;

TEST(IntegrateToZero, LinearDecayNeverArrivesButCrossesThreshold)
{
  // x' = -x: threshold 1e-4 from 1 at ln(1e4).
  const ScalarSettling r = integrate_to_zero([](double x) { return -x; }, 1.0, 1e-4, 1e-12);
  EXPECT_NEAR(r.threshold, std::log(1e4), 1e-3);
  EXPECT_NEAR(r.arrival, std::log(1e12), 1e-2);
}

TEST(IntegrateToZero, SquareRootLawArrivesOnTime)
{
  // x' = -sqrt|x| sign x, x0 = 1: x(t) = (1 - t/2)^2, zero at t = 2.
  const ScalarSettling r =
      integrate_to_zero([](double x) { return -std::copysign(std::sqrt(std::abs(x)), x); }, 1.0, 1e-4);
  EXPECT_NEAR(r.arrival, 2.0, 1e-6);
  EXPECT_NEAR(r.threshold, 2.0 * (1.0 - 1e-2), 1e-6);
}

TEST(SettlingChecks, HardwareGains)
{
  const control::AxisGains g;
  const SettlingCheck z = check_settling_z(g, 1.0);
  EXPECT_TRUE(z.pass);
  EXPECT_NEAR(z.predicted, 5.2114, 1e-4);
  EXPECT_LT(z.relative_error, 0.02);
  EXPECT_LE(z.threshold_time, z.predicted * 1.02);

  const SettlingCheck e = check_settling_e(g, 0.1);
  EXPECT_TRUE(e.pass);
  EXPECT_NEAR(e.predicted, 600.0 * std::pow(0.1, 0.05), 1e-9);
  EXPECT_LT(e.relative_error, 0.02);

  const SettlingCheck neg = check_settling_z(g, -2.0);
  EXPECT_TRUE(neg.pass);
  EXPECT_NEAR(neg.predicted, 5.2114 * std::pow(2.0, 0.28), 1e-3);
}

TEST(SettlingChecks, ZeroInitialConditionIsTrivial)
{
  const SettlingCheck z = check_settling_z({}, 0.0);
  EXPECT_TRUE(z.pass);
  EXPECT_EQ(z.predicted, 0.0);
}

TEST(Reaching, WithinBoundEntersAndStays)
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ReachingOptions o;
    o.seed = seed;
    const ReachingCheck r = check_reaching(o);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.pass) << r.note;
    EXPECT_GE(r.entry_time, 0.0);
    EXPECT_TRUE(r.stayed);
    EXPECT_EQ(r.sign_violations, 0u);
    EXPECT_LT(r.max_sigma_after_entry, kSigmaBand);
  }
}

TEST(Reaching, BoundViolationIsNotAFailure)
{
  ReachingOptions o;
  o.bound_factor = 3.0;
  const ReachingCheck r = check_reaching(o);
  EXPECT_FALSE(r.bound_holds);
  EXPECT_TRUE(r.pass);
  EXPECT_NE(r.note.find("bound violated"), std::string::npos);
}

TEST(Verification, FullSuiteReport)
{
  VerificationOptions o;
  o.reaching_runs = 4;
  const VerificationReport rep = run_verification(o);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_GE(rep.settling.size(), 8u);
  EXPECT_EQ(rep.reaching.size(), 4u);
  const nlohmann::json j = rep.to_json();
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_NE(rep.render().find("PASS"), std::string::npos);
}
