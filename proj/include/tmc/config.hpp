#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmc/channel.hpp"
#include "tmc/em_physics.hpp"
#include "tmc/modem.hpp"
#include "tmc/rx_frontend.hpp"

namespace tmc {

/// Sweep axes and Monte Carlo sizing for run_experiment.
struct ExperimentPlan {
  int trials = 8;
  int packets_per_trial = 25;
  std::uint64_t seed = 1;
  std::vector<double> symbol_rates;     // Hz; empty = just modem.symbol_rate
  std::vector<double> supply_sweep;     // volts; empty = just amplifier.supply_volts
  std::vector<double> horizontal_sweep; // m; empty = just the configured geometry
  std::vector<double> coplanar_sweep;   // m; exclusive with horizontal_sweep
  // Paper ADC rule: 10k samples/s below 1000 sym/s, else 50k. When false the
  // [rx] adc rate is used for every sweep point.
  bool adc_auto_rate = true;
};

/// Receive-side decision parameters that are not derivable from the modem.
struct DemodParams {
  LineCode line_code = LineCode::RZ;
  int movavg_window_symbols = 20;
  double ones_fraction = 0.6;
  double decision_threshold = 0.0;
};

/// One fully parsed configuration file: presets, sweeps, and the payload.
struct SystemConfig {
  std::optional<MaterialSpec> material;
  LinkBudget link{30.0, 0.2};
  CoilParams coil;
  PipeLoading pipe_loading;
  ModemConfig modem;
  AmplifierSpec amplifier;
  // Supply-to-current anchors for power reporting, linear interpolation.
  std::vector<std::pair<double, double>> supply_current_table{{8.0, 0.225}, {15.0, 0.3}};
  ChannelModel channel;
  bool channel_use_material = true;
  Geometry geometry;
  AmpConfig rx_amp;
  // Receive gain picked per capture so the peak lands on target (the bench
  // practice of adjusting the reference so the ADC never saturates).
  bool rx_auto_gain = true;
  double rx_auto_gain_target = 1.5;  // volts peak after the amplifier
  AdcConfig adc;
  DemodParams demod;
  ExperimentPlan experiment;
  std::string payload = "0101101011001100";

  double drive_current_for(double supply_volts) const;
  // channel with material attached (or stripped) per channel_use_material.
  ChannelModel effective_channel() const;
  void validate() const;
};

SystemConfig default_config();

// Strict flat INI: [section] headers, key = value lines, '#' comments.
// Unknown sections or keys are rejected with the offending line number.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Applies one "section.key" assignment on top of an existing config.
void config_set(SystemConfig& cfg, const std::string& dotted_key, const std::string& value);
std::string config_get(const SystemConfig& cfg, const std::string& dotted_key);

// Canonical serialization (every key, fixed order) and its FNV-1a 64 hash;
// the hash identifies a preset in --version output.
std::string serialize_config(const SystemConfig& cfg);
std::uint64_t config_hash(const SystemConfig& cfg);

}  // namespace tmc
