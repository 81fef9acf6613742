#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "wmr/model.hpp"

namespace wmr {

/// One additive disturbance segment on (d_x, d_y, d_theta). Every profile has
/// an analytic time derivative, so the flat-space pushforward never needs
/// numerical differentiation.
struct DisturbanceSegment {
  enum class Profile { constant, smooth_step, sinusoid, band_noise };

  struct Tone {
    double frequency = 0.0;  // Hz
    double phase = 0.0;
    double weight = 0.0;
  };

  Profile profile = Profile::constant;
  double t_start = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  Eigen::Vector3d amplitude = Eigen::Vector3d::Zero();

  double rise_time = 1.0;  // smooth_step: quintic rise after t_start, fall before t_end
  double frequency = 0.0;  // sinusoid [Hz]
  double phase = 0.0;      // sinusoid [rad]
  std::uint64_t seed = 0;  // band_noise
  double cutoff = 1.0;     // band_noise upper frequency [Hz]
  int components = 16;     // band_noise tone count

  /// Per-axis tone sets for band_noise; filled by DisturbanceSpec::realize.
  std::vector<std::vector<Tone>> tones;
};

struct DisturbanceSpec {
  std::vector<DisturbanceSegment> segments;
  double declared_bound = std::numeric_limits<double>::infinity();

  /// Conservative pointwise bound on the inf-norm of (d_x, d_y, d_theta).
  double peak_bound() const;

  /// Throws ScenarioInvalid if a segment is malformed or peak_bound() exceeds
  /// declared_bound.
  void validate() const;

  /// Draws band-noise tones from (segment seed, run seed). Deterministic.
  void realize(std::uint64_t run_seed);
};

/// Sum of active segments at time t, with exact time derivative.
DisturbanceSample disturbance_at(const DisturbanceSpec& spec, double t);

const char* to_string(DisturbanceSegment::Profile profile);

}  // namespace wmr
