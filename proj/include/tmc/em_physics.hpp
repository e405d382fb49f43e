#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace tmc {

inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;  // H/m

/// Metal barrier between the coils.
struct MaterialSpec {
  double conductivity = 0.0;           // S/m
  double relative_permeability = 1.0;  // dimensionless
  double thickness = 0.0;              // m

  double permeability() const { return kMu0 * relative_permeability; }
  void validate() const;
};

/// Transmit level and minimum detectable receive level (both volts peak).
struct LinkBudget {
  double v_transmit = 0.0;
  double v_receive_min = 0.0;

  void validate() const;
};

/// Lumped coil parameters. Resistance is frequency dependent and kept as a
/// sparse measurement table, interpolated linearly and clamped at the ends.
struct CoilParams {
  double inductance = 0.0;                                  // H
  std::vector<std::pair<double, double>> resistance_table;  // (Hz, ohms), Hz increasing
  double loop_area = 0.0;                                   // m^2
  double diameter = 0.0;                                    // m

  double resistance_at(double frequency) const;
  void validate() const;
};

struct SeriesCircuit {
  CoilParams coil;
  std::optional<double> capacitance;  // F; absent = plain coil
};

/// Eddy loading of a coil placed inside the metal pipe. The resistance
/// multiplier ramps linearly from 1 at DC to `resistance_ratio` at
/// `anchor_frequency` and stays constant above it.
struct PipeLoading {
  double inductance_factor = 12.0 / 15.0;
  double resistance_ratio = 5.025 / 3.369;
  double anchor_frequency = 1000.0;  // Hz
};

// delta = sqrt(2 / (sigma * 2*pi*f * mu)). Throws std::domain_error for f <= 0.
double skin_depth(const MaterialSpec& material, double frequency);

// e^(-d/delta(f)), in (0, 1].
double attenuation_factor(const MaterialSpec& material, double frequency);

// Highest carrier that still delivers v_receive_min from v_transmit:
// (ln Vt - ln Vr)^2 / (pi d^2 sigma mu).
double max_carrier_frequency(const MaterialSpec& material, const LinkBudget& budget);

// R(f) + j(wL - 1/(wC)); capacitive term omitted when no capacitor fitted.
std::complex<double> series_impedance(const SeriesCircuit& circuit, double frequency);

// 1 / (2*pi*sqrt(LC)). Throws std::domain_error when no capacitor fitted.
double resonant_frequency(const SeriesCircuit& circuit);

// Metal-loaded coil parameters from the in-air measurement.
CoilParams coil_in_pipe(const CoilParams& coil_air, const PipeLoading& loading = {});

}  // namespace tmc
