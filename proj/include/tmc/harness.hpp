#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tmc/channel.hpp"
#include "tmc/config.hpp"
#include "tmc/demod.hpp"
#include "tmc/em_physics.hpp"
#include "tmc/modem.hpp"
#include "tmc/rx_frontend.hpp"
#include "tmc/waveform.hpp"

namespace tmc {

// Stable per-trial seed derivation (splitmix64 over the master seed and the
// sweep-point/trial indices); execution order never feeds back into seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0, std::uint64_t d = 0);

/// One aggregated sweep point.
struct ResultRow {
  double symbol_rate = 0.0;
  double separation_m = 0.0;
  double supply_volts = 0.0;
  double power_watts = 0.0;
  int trials = 0;
  long long packets_sent = 0;
  long long packets_found = 0;
  double mean_ber = 0.0;
  double ber_stddev = 0.0;
  double inband_power_fraction = 0.0;  // received power below the symbol rate
  std::string status = "ok";
};

/// Everything produced by a single modulate -> amplify -> channel -> rx ->
/// demodulate pass.
struct ChainResult {
  Waveform tx;
  Waveform received;
  QuantizedCapture capture;
  BerReport report;
};

// One end-to-end pass at an explicit sweep coordinate.
ChainResult run_chain(const SystemConfig& sys, double symbol_rate, const Geometry& g,
                      double supply_volts, std::uint64_t trial_seed, int packets);

// Full sweep: symbol rates x geometries x supply levels x trials. Rows come
// out sorted by (symbol rate, separation, supply); invalid combinations
// produce error rows and the run continues.
std::vector<ResultRow> run_experiment(const SystemConfig& sys);

// CSV with one commented schema line, then one row per sweep point.
// Formatting is fixed so identical runs produce identical bytes.
std::string results_to_csv(const std::vector<ResultRow>& rows);

// Periodogram: |DFT|^2 scaled so the bin sum equals the time-domain energy.
// One-sided (DC..Nyquist). nfft = 0 picks the next power of two >= size;
// otherwise nfft must be >= the waveform size.
std::vector<std::pair<double, double>> estimate_spectrum(const Waveform& w,
                                                         std::size_t nfft = 0);

// Fraction of total spectrum power strictly below `frequency`.
double power_fraction_below(const std::vector<std::pair<double, double>>& spectrum,
                            double frequency);

/// Frequency-planning summary around the link-budget limit.
struct PlanReport {
  double max_carrier_hz = 0.0;
  double skin_depth_at_max_m = 0.0;
  double attenuation_at_max = 0.0;
  std::vector<std::pair<double, double>> attenuation_table;  // (Hz, e^(-d/delta))
};

PlanReport plan(const MaterialSpec& material, const LinkBudget& budget);

}  // namespace tmc
