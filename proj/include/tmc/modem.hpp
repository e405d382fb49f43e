#pragma once

#include <string>
#include <vector>

#include "tmc/waveform.hpp"

namespace tmc {

enum class LineCode { RZ, NRZ };

LineCode parse_line_code(const std::string& s);
const char* line_code_name(LineCode code);

/// Transmit-side framing and line-coding parameters.
struct ModemConfig {
  double symbol_rate = 500.0;    // symbols/s
  double sample_rate = 50000.0;  // samples/s, must be an integer multiple of symbol_rate
  double duty = 0.5;             // high fraction of a bit-1 symbol in RZ
  double amplitude = 1.0;        // volts, logic-high level
  LineCode line_code = LineCode::RZ;
  std::string preamble = "1111";
  int payload_len = 16;
  double gap = 200e-6;  // s of silence between packets

  int samples_per_symbol() const;
  int gap_samples() const;
  int packet_bits() const { return static_cast<int>(preamble.size()) + payload_len; }
  void validate() const;
};

struct Packet {
  std::string preamble;
  std::string payload;

  std::string bits() const { return preamble + payload; }
};

/// Switching amplifier, idealized: logic levels rescaled to the supply rail.
/// drive_amps is the measured supply current, used only for power reporting.
struct AmplifierSpec {
  double supply_volts = 8.0;
  double drive_amps = 0.225;

  double power_watts() const { return supply_volts * drive_amps; }
};

// Prepends the preamble. Throws std::invalid_argument on wrong payload length
// or non-bit characters.
Packet frame_packet(const std::string& payload, const ModemConfig& cfg);

// OOK line coding. RZ bit 1: duty*sps samples at amplitude then zeros; NRZ
// bit 1: the whole symbol at amplitude; bit 0: zeros. Packets separated by
// round(gap * sample_rate) zero samples (between packets only).
Waveform modulate(const std::vector<Packet>& packets, const ModemConfig& cfg);

// Peak rescaled to the supply rail; an all-zero waveform stays zero.
Waveform amplifier_output(const Waveform& w, const AmplifierSpec& amp);

}  // namespace tmc
