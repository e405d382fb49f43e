#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tmc/modem.hpp"

namespace tmc {

/// Receive-side decision parameters. sample_rate is the capture rate (after
/// any ADC decimation), not the synthesis rate.
struct DemodConfig {
  double symbol_rate = 500.0;
  double sample_rate = 10000.0;
  std::string preamble = "1111";
  int payload_len = 16;
  LineCode line_code = LineCode::RZ;
  int movavg_window_symbols = 20;
  double ones_fraction = 0.6;      // fraction of 1 bits in a framed packet
  double decision_threshold = 0.0; // volts, post-preprocessing
  double duty = 0.5;               // RZ high fraction (decision window)
  double gap = 200e-6;             // s between packets, for stream advance

  int samples_per_symbol() const;
  int template_samples() const;
  // Preamble search window, 24*(Rm/Rs) + 10 samples.
  int search_window() const;
  void validate() const;
};

struct PreambleMatch {
  std::size_t offset = 0;
  double distance = 0.0;  // squared Euclidean distance at the argmin
};

struct PacketDecode {
  std::size_t preamble_index = 0;
  std::string bits;
  double match_distance = 0.0;
};

struct BerReport {
  long long packets_found = 0;
  long long bits_compared = 0;
  long long bit_errors = 0;
  bool ber_defined = false;
  double ber = 0.0;

  void add(const BerReport& fragment);
};

// Subtracts the centered, edge-clamped moving average over
// movavg_window_symbols symbols, scaled by 1 / (2 * ones_fraction * duty_eff)
// where duty_eff is the RZ duty (1 for NRZ). Centers the decision levels
// around zero for the known packet statistics. Throws DecodeError when the
// input is shorter than one window.
std::vector<double> preprocess(std::span<const double> samples, const DemodConfig& cfg);

// Slides the line-coded "1111" template over the window and returns the
// offset of minimum squared Euclidean distance. The template amplitude is
// the 95th percentile of |samples| over the window. Throws DecodeError when
// the window is shorter than the template.
PreambleMatch detect_preamble(std::span<const double> preprocessed, const DemodConfig& cfg);

// Per-symbol mean over the decision window (RZ: the first duty fraction;
// NRZ: the whole symbol) compared against the threshold. Throws DecodeError
// with the partial bits when the packet is truncated.
std::string decide_symbols(std::span<const double> preprocessed, std::size_t start,
                           int bit_count, const DemodConfig& cfg);

// Hamming distance / length as a one-packet report fragment.
BerReport compute_ber(const std::string& decoded, const std::string& expected);

// Whole-capture demodulation: preprocess once, then per packet search a
// fresh window, decode, compare against expected_payload, and advance. Each
// packet is re-acquired by its own preamble search, so small sample-loss
// gaps do not desynchronize later packets.
BerReport demodulate_stream(std::span<const double> samples, const DemodConfig& cfg,
                            const std::string& expected_payload,
                            std::vector<PacketDecode>* decodes = nullptr);

}  // namespace tmc
