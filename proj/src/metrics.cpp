#include "wmr/metrics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wmr/errors.hpp"

namespace wmr::metrics {

namespace {

template <typename F>
double trapezoid(std::span<const double> samples, double dt, F&& integrand)
{
  if (samples.empty()) {
    throw EmptyTrace();
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    sum += 0.5 * (integrand(samples[i - 1]) + integrand(samples[i]));
  }
  return sum * dt;
}

std::vector<double> errors(const SimTrace& trace, Axis axis)
{
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    out.push_back(axis == Axis::x ? row.e.x() : row.e.y());
  }
  return out;
}

double duration_of(const SimTrace& trace)
{
  return trace.rows.size() < 2 ? 0.0 : trace.dt * static_cast<double>(trace.rows.size() - 1);
}

}  // namespace

double integrate_abs(std::span<const double> samples, double dt)
{
  return trapezoid(samples, dt, [](double e) { return std::abs(e); });
}

double integrate_square(std::span<const double> samples, double dt)
{
  return trapezoid(samples, dt, [](double e) { return e * e; });
}

double iae(const SimTrace& trace, Axis axis) { return integrate_abs(errors(trace, axis), trace.dt); }

double ise(const SimTrace& trace, Axis axis) { return integrate_square(errors(trace, axis), trace.dt); }

double p_avg(const SimTrace& trace)
{
  if (trace.rows.empty()) {
    throw EmptyTrace();
  }
  std::vector<double> utilization;
  utilization.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    const double v = row.saturated.v / trace.limits.v_max;
    const double w = row.saturated.w / trace.limits.w_max;
    utilization.push_back(0.5 * (v * v + w * w));
  }
  const double t = duration_of(trace);
  if (t == 0.0) {
    return utilization.front();
  }
  return trapezoid(utilization, trace.dt, [](double u) { return u; }) / t;
}

double virtual_effort(const SimTrace& trace)
{
  if (trace.rows.empty()) {
    throw EmptyTrace();
  }
  std::vector<double> sq;
  sq.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    sq.push_back(row.control.vec().squaredNorm());
  }
  const double t = duration_of(trace);
  if (t == 0.0) {
    return sq.front();
  }
  return trapezoid(sq, trace.dt, [](double u) { return u; }) / t;
}

MetricsReport evaluate(const SimTrace& trace)
{
  MetricsReport r;
  r.label = trace.controller_label;
  r.scenario_id = trace.scenario_id;
  r.iae_x = iae(trace, Axis::x);
  r.iae_y = iae(trace, Axis::y);
  r.ise_x = ise(trace, Axis::x);
  r.ise_y = ise(trace, Axis::y);
  r.p_avg = p_avg(trace);
  r.duration = duration_of(trace);
  return r;
}

ComparisonReport compare(const MetricsReport& a, const MetricsReport& b)
{
  if (a.scenario_id != b.scenario_id) {
    throw ScenarioMismatch("cannot compare '" + a.scenario_id + "' with '" + b.scenario_id + "'");
  }
  ComparisonReport out{a, b, {}, {}};
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i] == vb[i]) {
      out.ratio[i] = 1.0;
    } else if (va[i] == 0.0) {
      out.ratio[i] = std::numeric_limits<double>::infinity();
    } else {
      out.ratio[i] = vb[i] / va[i];
    }
    out.winner[i] = va[i] < vb[i] ? Winner::a : (vb[i] < va[i] ? Winner::b : Winner::none);
  }
  return out;
}

const char* to_string(Winner w)
{
  switch (w) {
    case Winner::a:
      return "a";
    case Winner::b:
      return "b";
    case Winner::none:
      break;
  }
  return "none";
}

std::string render_table(const MetricsReport& report)
{
  std::string out = fmt::format("scenario: {}\n{:<12}", report.scenario_id, "Controller");
  for (const char* name : kMetricNames) {
    out += fmt::format(" {:>12}", name);
  }
  out += fmt::format("\n{:<12}", report.label);
  for (double v : report.values()) {
    out += fmt::format(" {:>12.6g}", v);
  }
  out += fmt::format("\n* {}\n", kPavgNote);
  return out;
}

std::string render_table(const ComparisonReport& report)
{
  std::string out = fmt::format("scenario: {}\n{:<12}", report.a.scenario_id, "Controller");
  for (const char* name : kMetricNames) {
    out += fmt::format(" {:>12}", name);
  }
  out += '\n';
  for (const MetricsReport* r : {&report.a, &report.b}) {
    out += fmt::format("{:<12}", r->label);
    for (double v : r->values()) {
      out += fmt::format(" {:>12.6g}", v);
    }
    out += '\n';
  }
  out += fmt::format("{:<12}", "ratio b/a");
  for (double v : report.ratio) {
    out += fmt::format(" {:>12.4f}", v);
  }
  out += fmt::format("\n{:<12}", "winner");
  for (Winner w : report.winner) {
    const std::string name = w == Winner::a ? report.a.label : (w == Winner::b ? report.b.label : "-");
    out += fmt::format(" {:>12}", name);
  }
  out += fmt::format("\n* {}\n", kPavgNote);
  return out;
}

nlohmann::json to_json(const MetricsReport& report)
{
  return {{"label", report.label},   {"scenario", report.scenario_id}, {"duration", report.duration},
          {"iae_x", report.iae_x},   {"iae_y", report.iae_y},          {"ise_x", report.ise_x},
          {"ise_y", report.ise_y},   {"p_avg", report.p_avg},          {"p_avg_definition", kPavgNote}};
}

nlohmann::json to_json(const ComparisonReport& report)
{
  nlohmann::json metrics = nlohmann::json::object();
  const auto va = report.a.values();
  const auto vb = report.b.values();
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    metrics[kMetricNames[i]] = {
        {"a", va[i]}, {"b", vb[i]}, {"ratio_b_over_a", report.ratio[i]}, {"winner", to_string(report.winner[i])}};
  }
  return {{"scenario", report.a.scenario_id},
          {"a", to_json(report.a)},
          {"b", to_json(report.b)},
          {"metrics", metrics},
          {"p_avg_definition", kPavgNote}};
}

}  // namespace wmr::metrics
