#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmr/simulator.hpp"

namespace wmr::metrics {

enum class Axis { x, y };

/// Trapezoidal integrals over a uniform grid with spacing dt.
double integrate_abs(std::span<const double> samples, double dt);
double integrate_square(std::span<const double> samples, double dt);

double iae(const SimTrace& trace, Axis axis);
double ise(const SimTrace& trace, Axis axis);

/// Normalized mean-square actuator utilization:
/// (1/T) int ((v_sat / v_max)^2 + (w_sat / w_max)^2) / 2 dt, in [0, 1].
/// This definition is a project convention.
double p_avg(const SimTrace& trace);

/// Mean-square controller output (1/T) int (v_x^2 + v_y^2) dt, in (m/s^2)^2.
/// Unlike P_avg it excludes the effort of following the reference itself.
double virtual_effort(const SimTrace& trace);

inline constexpr const char* kPavgNote =
    "P_avg = (1/T) * integral of ((v/v_max)^2 + (w/w_max)^2)/2 dt over saturated commands (project convention)";

struct MetricsReport {
  std::string label;
  std::string scenario_id;
  double iae_x = 0.0;
  double iae_y = 0.0;
  double ise_x = 0.0;
  double ise_y = 0.0;
  double p_avg = 0.0;
  double duration = 0.0;

  /// Metric values in table order: IAE_x, IAE_y, ISE_x, ISE_y, P_avg.
  std::array<double, 5> values() const { return {iae_x, iae_y, ise_x, ise_y, p_avg}; }
};

inline constexpr std::array<const char*, 5> kMetricNames = {"IAE_x", "IAE_y", "ISE_x", "ISE_y", "P_avg"};

/// Throws EmptyTrace.
MetricsReport evaluate(const SimTrace& trace);

enum class Winner { none, a, b };

struct ComparisonReport {
  MetricsReport a;
  MetricsReport b;
  std::array<double, 5> ratio{};  // b / a per metric; 1 when both are zero
  std::array<Winner, 5> winner{};
};

/// Throws ScenarioMismatch when the reports come from different scenarios.
ComparisonReport compare(const MetricsReport& a, const MetricsReport& b);

std::string render_table(const ComparisonReport& report);
std::string render_table(const MetricsReport& report);

nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const ComparisonReport& report);

const char* to_string(Winner w);

}  // namespace wmr::metrics
