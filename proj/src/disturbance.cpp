#include "wmr/disturbance.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "wmr/errors.hpp"

namespace wmr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_rate(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

// Portable [0, 1) double from a 64-bit engine draw (std distributions are
// implementation-defined).
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::vector<DisturbanceSegment::Tone>> draw_tones(std::uint64_t seed, double cutoff, int components)
{
  std::mt19937_64 rng(seed);
  std::vector<std::vector<DisturbanceSegment::Tone>> axes(3);
  for (auto& tones : axes) {
    tones.resize(static_cast<std::size_t>(components));
    double total = 0.0;
    for (int k = 0; k < components; ++k) {
      auto& tone = tones[static_cast<std::size_t>(k)];
      // stratified frequencies in (0, cutoff]
      tone.frequency = cutoff * (k + 1.0 - unit(rng)) / components;
      tone.phase = kTwoPi * unit(rng);
      tone.weight = 0.5 + unit(rng);
      total += tone.weight;
    }
    for (auto& tone : tones) {
      tone.weight /= total;
    }
  }
  return axes;
}

// Envelope value and derivative of a segment at time t.
std::pair<double, double> envelope(const DisturbanceSegment& seg, double t)
{
  if (t < seg.t_start || t >= seg.t_end) {
    return {0.0, 0.0};
  }
  if (seg.profile != DisturbanceSegment::Profile::smooth_step) {
    return {1.0, 0.0};
  }
  const double rise = seg.rise_time;
  if (t < seg.t_start + rise) {
    const double u = (t - seg.t_start) / rise;
    return {smoothstep(u), smoothstep_rate(u) / rise};
  }
  if (t > seg.t_end - rise) {
    const double u = (seg.t_end - t) / rise;
    return {smoothstep(u), -smoothstep_rate(u) / rise};
  }
  return {1.0, 0.0};
}

}  // namespace

const char* to_string(DisturbanceSegment::Profile profile)
{
  switch (profile) {
    case DisturbanceSegment::Profile::constant:
      return "constant";
    case DisturbanceSegment::Profile::smooth_step:
      return "smooth_step";
    case DisturbanceSegment::Profile::sinusoid:
      return "sinusoid";
    case DisturbanceSegment::Profile::band_noise:
      return "band_noise";
  }
  return "unknown";
}

double DisturbanceSpec::peak_bound() const
{
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& seg : segments) {
    sum += seg.amplitude.cwiseAbs();
  }
  return sum.maxCoeff();
}

void DisturbanceSpec::validate() const
{
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    const std::string field = "disturbance.segments[" + std::to_string(i) + "]";
    if (!seg.amplitude.allFinite()) {
      throw ScenarioInvalid(field + ".amplitude", "must be finite");
    }
    if (!(seg.t_end > seg.t_start) || !(seg.t_start >= 0.0)) {
      throw ScenarioInvalid(field + ".t_end", "need 0 <= t_start < t_end");
    }
    switch (seg.profile) {
      case DisturbanceSegment::Profile::smooth_step:
        if (!(seg.rise_time > 0.0)) {
          throw ScenarioInvalid(field + ".rise_time", "must be > 0");
        }
        if (std::isfinite(seg.t_end) && seg.t_end - seg.t_start < 2.0 * seg.rise_time) {
          throw ScenarioInvalid(field + ".rise_time", "segment shorter than rise + fall");
        }
        break;
      case DisturbanceSegment::Profile::sinusoid:
        if (!(seg.frequency >= 0.0) || !std::isfinite(seg.frequency)) {
          throw ScenarioInvalid(field + ".frequency", "must be >= 0");
        }
        break;
      case DisturbanceSegment::Profile::band_noise:
        if (!(seg.cutoff > 0.0) || !std::isfinite(seg.cutoff)) {
          throw ScenarioInvalid(field + ".cutoff", "must be > 0");
        }
        if (seg.components < 1) {
          throw ScenarioInvalid(field + ".components", "must be >= 1");
        }
        break;
      case DisturbanceSegment::Profile::constant:
        break;
    }
  }
  if (!(declared_bound >= 0.0)) {
    throw ScenarioInvalid("disturbance.declared_bound", "must be >= 0");
  }
  if (peak_bound() > declared_bound) {
    throw ScenarioInvalid("disturbance.declared_bound",
                          "segment amplitudes sum to " + std::to_string(peak_bound()) + ", above the declared bound");
  }
}

void DisturbanceSpec::realize(std::uint64_t run_seed)
{
  for (auto& seg : segments) {
    if (seg.profile == DisturbanceSegment::Profile::band_noise) {
      seg.tones = draw_tones(mix(seg.seed, run_seed), seg.cutoff, seg.components);
    }
  }
}

DisturbanceSample disturbance_at(const DisturbanceSpec& spec, double t)
{
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  Eigen::Vector3d rate = Eigen::Vector3d::Zero();
  for (const auto& seg : spec.segments) {
    const auto [env, env_rate] = envelope(seg, t);
    if (env == 0.0 && env_rate == 0.0) {
      continue;
    }
    Eigen::Vector3d shape = seg.amplitude;
    Eigen::Vector3d shape_rate = Eigen::Vector3d::Zero();
    if (seg.profile == DisturbanceSegment::Profile::sinusoid) {
      const double arg = kTwoPi * seg.frequency * t + seg.phase;
      shape = seg.amplitude * std::sin(arg);
      shape_rate = seg.amplitude * (kTwoPi * seg.frequency * std::cos(arg));
    } else if (seg.profile == DisturbanceSegment::Profile::band_noise) {
      std::vector<std::vector<DisturbanceSegment::Tone>> unrealized;
      if (seg.tones.empty()) {
        unrealized = draw_tones(mix(seg.seed, 0), seg.cutoff, seg.components);
      }
      const auto& tones = seg.tones.empty() ? unrealized : seg.tones;
      for (int axis = 0; axis < 3; ++axis) {
        double sum = 0.0;
        double sum_rate = 0.0;
        for (const auto& tone : tones[static_cast<std::size_t>(axis)]) {
          const double omega = kTwoPi * tone.frequency;
          const double arg = omega * t + tone.phase;
          sum += tone.weight * std::sin(arg);
          sum_rate += tone.weight * omega * std::cos(arg);
        }
        shape[axis] = seg.amplitude[axis] * sum;
        shape_rate[axis] = seg.amplitude[axis] * sum_rate;
      }
    }
    value += env * shape;
    rate += env_rate * shape + env * shape_rate;
  }
  return {value.x(), value.y(), value.z(), rate.x(), rate.y(), rate.z()};
}

}  // namespace wmr
