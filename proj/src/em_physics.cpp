#include "tmc/em_physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tmc/errors.hpp"

namespace tmc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void MaterialSpec::validate() const {
  if (!(conductivity > 0.0)) throw std::invalid_argument("material: conductivity must be > 0");
  if (!(relative_permeability > 0.0))
    throw std::invalid_argument("material: relative_permeability must be > 0");
  // Zero thickness is the no-barrier limit (attenuation exactly 1).
  if (!(thickness >= 0.0)) throw std::invalid_argument("material: thickness must be >= 0");
}

void LinkBudget::validate() const {
  if (!(v_receive_min > 0.0)) throw std::invalid_argument("link: v_receive_min must be > 0");
  // Equality is allowed so the degenerate zero-frequency budget stays expressible.
  if (!(v_transmit >= v_receive_min))
    throw std::invalid_argument("link: v_transmit must be >= v_receive_min");
}

double CoilParams::resistance_at(double frequency) const {
  if (resistance_table.empty()) throw ConfigError("coil: empty resistance table");
  const auto& t = resistance_table;
  if (frequency <= t.front().first) return t.front().second;
  if (frequency >= t.back().first) return t.back().second;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (frequency <= t[i].first) {
      const double f0 = t[i - 1].first, f1 = t[i].first;
      const double r0 = t[i - 1].second, r1 = t[i].second;
      return r0 + (r1 - r0) * (frequency - f0) / (f1 - f0);
    }
  }
  return t.back().second;
}

void CoilParams::validate() const {
  if (!(inductance > 0.0)) throw std::invalid_argument("coil: inductance must be > 0");
  for (std::size_t i = 0; i < resistance_table.size(); ++i) {
    if (!(resistance_table[i].second > 0.0))
      throw std::invalid_argument("coil: resistances must be > 0");
    if (i > 0 && !(resistance_table[i].first > resistance_table[i - 1].first))
      throw std::invalid_argument("coil: resistance table frequencies must increase");
  }
  if (diameter > 0.0 && loop_area > 0.0) {
    const double from_diameter = kPi * diameter * diameter / 4.0;
    if (std::abs(loop_area - from_diameter) > 0.01 * from_diameter)
      throw std::invalid_argument("coil: loop_area inconsistent with diameter");
  }
}

double skin_depth(const MaterialSpec& material, double frequency) {
  material.validate();
  if (!(frequency > 0.0)) throw std::domain_error("skin_depth: frequency must be > 0");
  const double omega = 2.0 * kPi * frequency;
  return std::sqrt(2.0 / (material.conductivity * omega * material.permeability()));
}

double attenuation_factor(const MaterialSpec& material, double frequency) {
  return std::exp(-material.thickness / skin_depth(material, frequency));
}

double max_carrier_frequency(const MaterialSpec& material, const LinkBudget& budget) {
  material.validate();
  budget.validate();
  const double log_ratio = std::log(budget.v_transmit) - std::log(budget.v_receive_min);
  const double d = material.thickness;
  return log_ratio * log_ratio /
         (kPi * d * d * material.conductivity * material.permeability());
}

std::complex<double> series_impedance(const SeriesCircuit& circuit, double frequency) {
  if (!(frequency > 0.0)) throw std::domain_error("series_impedance: frequency must be > 0");
  const double resistance = circuit.coil.resistance_at(frequency);
  const double omega = 2.0 * kPi * frequency;
  double reactance = omega * circuit.coil.inductance;
  if (circuit.capacitance) {
    if (!(*circuit.capacitance > 0.0))
      throw std::invalid_argument("series circuit: capacitance must be > 0");
    reactance -= 1.0 / (omega * *circuit.capacitance);
  }
  return {resistance, reactance};
}

double resonant_frequency(const SeriesCircuit& circuit) {
  if (!circuit.capacitance) throw std::domain_error("resonant_frequency: no capacitor fitted");
  if (!(*circuit.capacitance > 0.0) || !(circuit.coil.inductance > 0.0))
    throw std::domain_error("resonant_frequency: L and C must be > 0");
  return 1.0 / (2.0 * kPi * std::sqrt(circuit.coil.inductance * *circuit.capacitance));
}

CoilParams coil_in_pipe(const CoilParams& coil_air, const PipeLoading& loading) {
  coil_air.validate();
  CoilParams loaded = coil_air;
  loaded.inductance *= loading.inductance_factor;
  for (auto& [freq, resistance] : loaded.resistance_table) {
    const double ramp = std::min(freq, loading.anchor_frequency) / loading.anchor_frequency;
    resistance *= 1.0 + (loading.resistance_ratio - 1.0) * ramp;
  }
  return loaded;
}

}  // namespace tmc
