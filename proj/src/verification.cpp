#include "wmr/verification.hpp"

#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace wmr::verify {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

SettlingCheck finish(SettlingCheck c, const ScalarSettling& s, double tolerance)
{
  c.arrival = s.arrival;
  c.threshold_time = s.threshold;
  c.relative_error = c.predicted == 0.0 ? std::abs(s.arrival) : std::abs(s.arrival - c.predicted) / c.predicted;
  c.pass = c.relative_error <= tolerance && s.threshold <= c.predicted * (1.0 + tolerance);
  return c;
}

nlohmann::json gains_json(const control::AxisGains& g)
{
  return {{"kappa1", g.kappa1}, {"kappa2", g.kappa2},     {"phi", g.phi},          {"mu", g.mu},
          {"beta", g.beta},     {"upsilon1", g.upsilon1}, {"upsilon2", g.upsilon2}};
}

}  // namespace

ScalarSettling integrate_to_zero(const std::function<double(double)>& rhs, double x0, double threshold_level,
                                 double floor, double step_fraction)
{
  ScalarSettling out;
  const double stop = floor * std::abs(x0);
  double x = x0;
  double t = 0.0;
  out.threshold = std::abs(x0) < threshold_level ? 0.0 : -1.0;
  while (std::abs(x) > stop) {
    const double f = rhs(x);
    if (f == 0.0) {
      break;
    }
    const double h = step_fraction * std::abs(x / f);
    const double k1 = f;
    const double k2 = rhs(x + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h * k2);
    const double k4 = rhs(x + h * k3);
    const double next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (out.threshold < 0.0 && std::abs(next) < threshold_level) {
      // linear interpolation inside the step
      out.threshold = t + h * (std::abs(x) - threshold_level) / (std::abs(x) - std::abs(next));
    }
    t += h;
    ++out.steps;
    if (next == 0.0 || std::signbit(next) != std::signbit(x)) {
      x = 0.0;
      break;
    }
    x = next;
  }
  out.arrival = t;
  return out;
}

SettlingCheck check_settling_z(const control::AxisGains& g, double z0, double tolerance)
{
  SettlingCheck c;
  c.variable = "z";
  c.gains = g;
  c.x0 = z0;
  c.predicted = control::settling_time_z(z0, g);
  c.threshold_level = 1e-4;
  const double gain = 1.0 / (g.mu * g.beta);
  const double exponent = 2.0 - g.beta;
  auto rhs = [&](double z) { return -gain * std::pow(std::abs(z), exponent) * (z > 0.0 ? 1.0 : -1.0); };
  return finish(c, integrate_to_zero(rhs, z0, c.threshold_level), tolerance);
}

SettlingCheck check_settling_e(const control::AxisGains& g, double e0, double tolerance)
{
  SettlingCheck c;
  c.variable = "e";
  c.gains = g;
  c.x0 = e0;
  c.predicted = control::settling_time_e(e0, g);
  c.threshold_level = 1e-4 * std::abs(e0);
  const double gain = g.kappa2 / g.kappa1;
  auto rhs = [&](double e) { return -gain * std::pow(std::abs(e), g.phi) * (e > 0.0 ? 1.0 : -1.0); };
  return finish(c, integrate_to_zero(rhs, e0, c.threshold_level), tolerance);
}

ReachingCheck check_reaching(const ReachingOptions& o)
{
  std::mt19937_64 rng(o.seed);
  const control::GainSet gains{o.gains, o.gains};
  const control::Chattering chattering{};

  ReachingCheck out;
  out.seed = o.seed;
  out.varpi_bound = o.bound_factor * o.gains.upsilon2 / o.gains.kappa1;
  out.bound_holds = control::reaching_bound_holds(out.varpi_bound, o.gains);

  // Reference: smooth Lissajous-type curve with nonzero acceleration.
  auto reference = [](double t) {
    FlatPoint f;
    f.gamma = {0.5 * std::sin(0.2 * t), 0.3 * std::cos(0.15 * t)};
    f.gamma_dot = {0.1 * std::cos(0.2 * t), -0.045 * std::sin(0.15 * t)};
    f.gamma_ddot = {-0.02 * std::sin(0.2 * t), -0.00675 * std::cos(0.15 * t)};
    return f;
  };

  out.e0 = uniform(rng, -o.max_e0, o.max_e0);
  out.e_dot0 = uniform(rng, -o.max_e_dot0, o.max_e_dot0);
  const double e0_y = uniform(rng, -o.max_e0, o.max_e0);
  const double e_dot0_y = uniform(rng, -o.max_e_dot0, o.max_e_dot0);

  const FlatPoint r0 = reference(0.0);
  Eigen::Vector2d pos = r0.gamma + Eigen::Vector2d{out.e0, e0_y};
  Eigen::Vector2d vel = r0.gamma_dot + Eigen::Vector2d{out.e_dot0, e_dot0_y};
  Eigen::Vector2d varpi = Eigen::Vector2d::Zero();

  control::SlidingState state;
  const auto steps = static_cast<std::size_t>(std::llround(o.duration / o.dt));
  const auto hold = static_cast<std::size_t>(std::max(1.0, std::round(o.hold_time / o.dt)));
  std::array<double, 2> prev_sigma{};
  bool inside = false;
  out.stayed = true;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * o.dt;
    if (k % hold == 0) {
      varpi = {uniform(rng, -out.varpi_bound, out.varpi_bound), uniform(rng, -out.varpi_bound, out.varpi_bound)};
    }
    const FlatPoint ref = reference(t);
    const Eigen::Vector2d e = pos - ref.gamma;
    const Eigen::Vector2d e_dot = vel - ref.gamma_dot;
    const control::TrackingError err{{e.x(), e_dot.x()}, {e.y(), e_dot.y()}};
    const auto step =
        control::inhsmc_step(err, ref, state, gains, o.dt, control::EquivalentMode::derived, chattering);
    state = step.state;
    const std::array<double, 2> sigma{state.x.sigma, state.y.sigma};

    if (k > 0) {
      for (std::size_t i = 0; i < 2; ++i) {
        if (std::abs(prev_sigma[i]) > o.band && prev_sigma[i] * (sigma[i] - prev_sigma[i]) > 0.0) {
          ++out.sign_violations;
        }
      }
    }
    const bool in_band = std::abs(sigma[0]) < o.band && std::abs(sigma[1]) < o.band;
    if (!inside && in_band) {
      inside = true;
      out.entry_time = t;
    } else if (inside) {
      out.max_sigma_after_entry = std::max({out.max_sigma_after_entry, std::abs(sigma[0]), std::abs(sigma[1])});
      if (!in_band) {
        out.stayed = false;
      }
    }
    prev_sigma = sigma;

    // Exact ZOH integration of the disturbed double integrator.
    const Eigen::Vector2d acc = step.control.vec() + varpi;
    pos += vel * o.dt + 0.5 * acc * o.dt * o.dt;
    vel += acc * o.dt;
  }

  if (!inside) {
    out.stayed = false;
  }
  if (!out.bound_holds) {
    out.note = "bound violated - not a failure";
    out.pass = true;
  } else {
    out.pass = inside && out.stayed && out.sign_violations == 0;
  }
  return out;
}

bool VerificationReport::all_pass() const
{
  for (const auto& c : settling) {
    if (!c.pass) {
      return false;
    }
  }
  for (const auto& c : reaching) {
    if (!c.pass) {
      return false;
    }
  }
  return true;
}

std::string VerificationReport::render() const
{
  std::string out = "settling-time checks (numerical arrival vs closed form)\n";
  out += fmt::format("{:<3} {:>6} {:>6} {:>6} {:>8} {:>12} {:>12} {:>9} {:>12}  {}\n", "var", "mu", "beta", "phi",
                     "x0", "predicted", "measured", "rel.err", "t(|x|<thr)", "result");
  for (const auto& c : settling) {
    out += fmt::format("{:<3} {:>6.3g} {:>6.3g} {:>6.3g} {:>8.3g} {:>12.6g} {:>12.6g} {:>9.2e} {:>12.6g}  {}\n",
                       c.variable, c.gains.mu, c.gains.beta, c.gains.phi, c.x0, c.predicted, c.arrival,
                       c.relative_error, c.threshold_time, c.pass ? "PASS" : "FAIL");
  }
  out += fmt::format("\nreaching checks (|sigma| band {:g})\n", band);
  out += fmt::format("{:>6} {:>9} {:>9} {:>10} {:>10} {:>7} {:>10}  {}\n", "seed", "e0", "e_dot0", "varpi_max",
                     "t_enter", "stayed", "sign_viol", "result");
  for (const auto& c : reaching) {
    out += fmt::format("{:>6} {:>9.4f} {:>9.4f} {:>10.3e} {:>10.3f} {:>7} {:>10}  {}{}\n", c.seed, c.e0, c.e_dot0,
                       c.varpi_bound, c.entry_time, c.stayed ? "yes" : "no", c.sign_violations,
                       c.pass ? "PASS" : "FAIL", c.note.empty() ? "" : " (" + c.note + ")");
  }
  out += all_pass() ? "\nall checks passed\n" : "\nSOME CHECKS FAILED\n";
  return out;
}

nlohmann::json VerificationReport::to_json() const
{
  nlohmann::json j;
  j["band"] = band;
  j["all_pass"] = all_pass();
  j["settling"] = nlohmann::json::array();
  for (const auto& c : settling) {
    j["settling"].push_back({{"variable", c.variable},
                             {"gains", gains_json(c.gains)},
                             {"x0", c.x0},
                             {"predicted", c.predicted},
                             {"measured", c.arrival},
                             {"relative_error", c.relative_error},
                             {"threshold", c.threshold_level},
                             {"threshold_time", c.threshold_time},
                             {"pass", c.pass}});
  }
  j["reaching"] = nlohmann::json::array();
  for (const auto& c : reaching) {
    j["reaching"].push_back({{"seed", c.seed},
                             {"e0", c.e0},
                             {"e_dot0", c.e_dot0},
                             {"varpi_bound", c.varpi_bound},
                             {"bound_holds", c.bound_holds},
                             {"entry_time", c.entry_time},
                             {"stayed", c.stayed},
                             {"sign_violations", c.sign_violations},
                             {"max_sigma_after_entry", c.max_sigma_after_entry},
                             {"pass", c.pass},
                             {"note", c.note}});
  }
  return j;
}

VerificationReport run_verification(const VerificationOptions& options)
{
  VerificationReport report;
  const control::AxisGains hardware{};
  control::AxisGains fast = hardware;
  fast.mu = 0.5;
  fast.beta = 1.5;
  fast.kappa2 = 0.5;
  fast.phi = 0.7;
  control::AxisGains steep = hardware;
  steep.mu = 2.0;
  steep.beta = 1.1;
  steep.kappa1 = 1.0;
  steep.phi = 0.6;

  for (const auto& g : {hardware, fast, steep}) {
    for (double z0 : {0.1, 0.5, 1.0, 2.0, -1.0}) {
      report.settling.push_back(check_settling_z(g, z0));
    }
    for (double e0 : {0.1, 0.5, 1.0, -2.0}) {
      report.settling.push_back(check_settling_e(g, e0));
    }
  }

  std::mt19937_64 seeds(options.seed);
  for (std::size_t i = 0; i < options.reaching_runs; ++i) {
    ReachingOptions ro;
    ro.seed = seeds();
    ro.bound_factor = options.bound_factor;
    report.reaching.push_back(check_reaching(ro));
  }
  return report;
}

}  // namespace wmr::verify
