#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tmc/waveform.hpp"

namespace tmc {

/// Microcontroller ADC with a bounded capture buffer. Flushing the buffer
/// over the serial port loses a few samples per flush.
struct AdcConfig {
  double sample_rate = 50000.0;  // samples/s
  int resolution_bits = 10;
  double v_ref = 5.0;     // volts full scale
  int buffer_len = 2500;  // samples per flush cycle
  int loss_per_flush = 5;

  double lsb() const { return v_ref / static_cast<double>(1 << resolution_bits); }
  void validate() const;
};

/// Receive amplifier, idealized as a gain with hard rails.
struct AmpConfig {
  double gain = 30.0;
  double saturation = 4.5;  // volts

  void validate() const;
};

/// Quantized ADC output. Codes are mid-tread over [0, v_ref); offset_volts is
/// subtracted on reconstruction (bipolar input lifted to the unipolar ADC).
struct QuantizedCapture {
  double sample_rate = 0.0;
  int resolution_bits = 10;
  double v_ref = 5.0;
  double offset_volts = 0.0;
  std::vector<int> codes;
  std::vector<std::size_t> gap_positions;  // output indices where samples were dropped

  double volts(std::size_t i) const {
    const double lsb = v_ref / static_cast<double>(1 << resolution_bits);
    return static_cast<double>(codes[i]) * lsb - offset_volts;
  }
  std::vector<double> to_volts() const;
};

// Gain then hard clip at +/- saturation.
Waveform amplify(const Waveform& w, const AmpConfig& amp);

// Decimate by the integer stride w.sample_rate / cfg.sample_rate, then round
// each sample to the nearest code (code * v_ref / 2^bits, clamped to
// [0, 2^bits - 1]). Throws ConfigError when the stride is not an integer.
QuantizedCapture adc_sample(const Waveform& w, const AdcConfig& cfg);

// Deletes cfg.loss_per_flush consecutive samples at the end of every full
// buffer_len input cycle; the seed jitters each deletion point within +/- 10
// samples. Gap positions index into the returned code stream.
QuantizedCapture apply_sample_loss(const QuantizedCapture& capture, const AdcConfig& cfg,
                                   std::uint64_t seed);

// Capture CSV: "# sample_rate_hz=", "# v_ref=", "# bits=" header lines,
// "# gap_at=<index>" lines, then one integer code per line.
void save_capture_csv(const QuantizedCapture& capture, const std::string& path);
QuantizedCapture load_capture_csv(const std::string& path);

}  // namespace tmc
