#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tmc/em_physics.hpp"
#include "tmc/waveform.hpp"

namespace tmc {

/// Coil placement. Either a coplanar distance (air bench tests) or a
/// horizontal/vertical offset pair (coil outside the pipe wall).
struct Geometry {
  std::optional<double> coplanar_distance;  // m
  double horizontal_offset = 0.0;           // m
  double vertical_offset = 0.0;             // m, includes the wall thickness

  void validate() const;
};

// coplanar_distance when present, else sqrt(h^2 + v^2).
double separation(const Geometry& g);

/// Composite link model: geometric falloff x single-pole derivative coupling
/// x skin-depth attenuation, plus additive white Gaussian noise.
struct ChannelModel {
  double coupling_gain_ref = 1.0;      // |H| high-frequency asymptote at reference_separation
  double reference_separation = 0.02;  // m
  double falloff_exponent = 3.0;       // near-field magnetic dipole default
  double pole_frequency = 100.0;       // Hz
  bool derivative_coupling = true;
  std::optional<MaterialSpec> material;  // absent = air path
  double noise_rms = 0.0;                // volts at the channel output
  std::uint64_t seed = 0;

  void validate() const;
};

// H(f) = G(g) * [j f/fp / (1 + j f/fp)] * e^(-d/delta(f)); H(0) = 0.
std::complex<double> transfer_function(const ChannelModel& ch, const Geometry& g,
                                       double frequency);

// Frequency-domain application of H plus seeded AWGN. Output has the input's
// length and sample rate; bit-identical for identical inputs and seed.
Waveform apply_channel(const Waveform& w, const ChannelModel& ch, const Geometry& g);

struct CalibrationResult {
  ChannelModel model;
  double residual = 0.0;  // RMS misfit over the points
};

// Least-squares fit of coupling_gain_ref and pole_frequency to measured
// gain-vs-frequency points, taken at the model's reference separation.
// Grid search over the pole followed by golden-section refinement; the gain
// is solved in closed form at each candidate pole. Throws FitError on fewer
// than 3 points or a degenerate (single-frequency) set.
CalibrationResult calibrate(const std::vector<std::pair<double, double>>& gain_points,
                            const ChannelModel& ch);

}  // namespace tmc
