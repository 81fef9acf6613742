#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "wmr/errors.hpp"
#include "wmr/metrics.hpp"

using namespace wmr;
using namespace wmr::metrics;

namespace {

SimTrace synthetic(double duration, double dt, const std::function<double(double)>& ex,
                   const std::function<double(double)>& ey = [](double) { return 0.0; })
{
  SimTrace tr;
  tr.scenario_id = "synthetic";
  tr.controller_label = "test";
  tr.dt = dt;
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    TraceRow r;
    r.t = static_cast<double>(k) * dt;
    r.e = {ex(r.t), ey(r.t)};
    tr.rows.push_back(r);
  }
  return tr;
}

MetricsReport report(const std::string& label, std::array<double, 5> v)
{
  MetricsReport r;
  r.label = label;
  r.scenario_id = "hardware";
  r.iae_x = v[0];
  r.iae_y = v[1];
  r.ise_x = v[2];
  r.ise_y = v[3];
  r.p_avg = v[4];
  return r;
}

}  // namespace

TEST(Iae, Examples)
{
  EXPECT_EQ(iae(synthetic(10, 0.01, [](double) { return 0.0; }), Axis::x), 0.0);
  EXPECT_NEAR(iae(synthetic(10, 0.01, [](double) { return 0.1; }), Axis::x), 1.0, 1e-12);
  EXPECT_NEAR(iae(synthetic(1, 0.001, [](double t) { return t; }), Axis::x), 0.5, 1e-6);
  EXPECT_NEAR(iae(synthetic(1, 0.001, [](double) { return 0.0; }, [](double t) { return -t; }), Axis::y), 0.5,
              1e-6);
}

TEST(Ise, Examples)
{
  EXPECT_EQ(ise(synthetic(10, 0.01, [](double) { return 0.0; }), Axis::x), 0.0);
  EXPECT_NEAR(ise(synthetic(10, 0.01, [](double) { return 0.1; }), Axis::x), 0.1, 1e-12);
  EXPECT_NEAR(ise(synthetic(1, 0.001, [](double t) { return t; }), Axis::x), 1.0 / 3.0, 1e-6);
}

TEST(Metrics, EmptyTraceThrows)
{
  SimTrace tr;
  tr.dt = 0.01;
  EXPECT_THROW(iae(tr, Axis::x), EmptyTrace);
  EXPECT_THROW(p_avg(tr), EmptyTrace);
  EXPECT_THROW(evaluate(tr), EmptyTrace);
}

TEST(PAvg, Examples)
{
  SimTrace tr = synthetic(5, 0.01, [](double) { return 0.0; });
  EXPECT_EQ(p_avg(tr), 0.0);
  for (auto& r : tr.rows) {
    r.saturated = {tr.limits.v_max, 0.0};
  }
  EXPECT_NEAR(p_avg(tr), 0.5, 1e-12);
  for (auto& r : tr.rows) {
    r.saturated = {-tr.limits.v_max, tr.limits.w_max};
  }
  EXPECT_NEAR(p_avg(tr), 1.0, 1e-12);
}

TEST(Metrics, ScaleLawsAndCauchySchwarz)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1), c(0.01, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng), f = 3 * std::abs(u(rng)) + 0.1, ph = u(rng);
    auto sig = [=](double t) { return a * std::sin(f * t + ph) + b * t * std::exp(-t); };
    const SimTrace base = synthetic(5, 0.01, sig);
    const double scale = c(rng);
    const SimTrace scaled = synthetic(5, 0.01, [&](double t) { return scale * sig(t); });
    const double i1 = iae(base, Axis::x), s1 = ise(base, Axis::x);
    EXPECT_NEAR(iae(scaled, Axis::x), scale * i1, 1e-9 * scale * i1);
    EXPECT_NEAR(ise(scaled, Axis::x), scale * scale * s1, 1e-9 * scale * scale * s1);
    EXPECT_LE(i1 * i1, 5.0 * s1 * (1 + 1e-9));
  }
}

TEST(Metrics, GridRefinement)
{
  auto sig = [](double t) { return 0.3 * std::sin(0.7 * t) * std::exp(-0.05 * t) + 0.01; };
  const SimTrace coarse = synthetic(40, 0.01, sig);
  const SimTrace fine = synthetic(40, 0.005, sig);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  EXPECT_LT(rel(iae(coarse, Axis::x), iae(fine, Axis::x)), 0.005);
  EXPECT_LT(rel(ise(coarse, Axis::x), ise(fine, Axis::x)), 0.005);
}

TEST(Compare, IdenticalReports)
{
  const MetricsReport a = report("a", {1, 2, 3, 4, 0.5});
  const ComparisonReport c = compare(a, a);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(c.ratio[i], 1.0);
    EXPECT_EQ(c.winner[i], Winner::none);
  }
  const MetricsReport zero = report("z", {0, 0, 0, 0, 0});
  EXPECT_EQ(compare(zero, zero).ratio[0], 1.0);
}

TEST(Compare, HardwareTable)
{
  const MetricsReport fbsmc = report("FBSMC", {7.0131, 6.9040, 0.9719, 0.5829, 0.0967});
  const MetricsReport proposed = report("Proposed", {3.8904, 6.4075, 0.2465, 0.3763, 0.0293});
  const ComparisonReport c = compare(fbsmc, proposed);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(c.winner[i], Winner::b) << kMetricNames[i];
    EXPECT_LT(c.ratio[i], 1.0);
  }
  EXPECT_NEAR(c.ratio[0], 3.8904 / 7.0131, 1e-15);
  const std::string table = render_table(c);
  EXPECT_NE(table.find("Proposed"), std::string::npos);
  EXPECT_NE(table.find("P_avg ="), std::string::npos);
}

TEST(Compare, SingleMetricWinner)
{
  const MetricsReport a = report("a", {1, 1, 1, 1, 1});
  const MetricsReport b = report("b", {1, 1, 0.5, 1, 1});
  const ComparisonReport c = compare(a, b);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(c.winner[i], i == 2 ? Winner::b : Winner::none);
  }
  EXPECT_EQ(compare(b, a).winner[2], Winner::a);
}

TEST(Compare, ScenarioMismatch)
{
  MetricsReport a = report("a", {1, 1, 1, 1, 1});
  MetricsReport b = a;
  b.scenario_id = "other";
  EXPECT_THROW(compare(a, b), ScenarioMismatch);
}

TEST(Evaluate, JsonCarriesDefinition)
{
  const SimTrace tr = synthetic(2, 0.01, [](double t) { return t; });
  const MetricsReport r = evaluate(tr);
  EXPECT_NEAR(r.duration, 2.0, 1e-12);
  const nlohmann::json j = to_json(r);
  EXPECT_NEAR(j["iae_x"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(j.contains("p_avg_definition"));
}

TEST(VirtualEffort, ConstantControl)
{
  SimTrace tr = synthetic(3, 0.01, [](double) { return 0.0; });
  for (auto& r : tr.rows) {
    r.control = {0.3, -0.4};
  }
  EXPECT_NEAR(virtual_effort(tr), 0.25, 1e-12);
}
