#include "tmc/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmc {

LineCode parse_line_code(const std::string& s) {
  if (s == "rz" || s == "RZ") return LineCode::RZ;
  if (s == "nrz" || s == "NRZ") return LineCode::NRZ;
  throw std::invalid_argument("unknown line code: " + s);
}

const char* line_code_name(LineCode code) {
  return code == LineCode::RZ ? "rz" : "nrz";
}

namespace {

bool is_bit_string(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

int ModemConfig::samples_per_symbol() const {
  return static_cast<int>(std::llround(sample_rate / symbol_rate));
}

int ModemConfig::gap_samples() const {
  return static_cast<int>(std::llround(gap * sample_rate));
}

void ModemConfig::validate() const {
  if (!(symbol_rate > 0.0) || !(sample_rate > 0.0))
    throw std::invalid_argument("modem: rates must be > 0");
  const double ratio = sample_rate / symbol_rate;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9 || std::llround(ratio) < 2)
    throw std::invalid_argument("modem: sample_rate must be an integer multiple (>= 2) of symbol_rate");
  if (!(duty > 0.0) || !(duty < 1.0)) throw std::invalid_argument("modem: duty must be in (0, 1)");
  const double high = duty * ratio;
  if (std::abs(high - std::llround(high)) > 1e-9)
    throw std::invalid_argument("modem: duty * samples_per_symbol must be an integer");
  if (!(amplitude > 0.0)) throw std::invalid_argument("modem: amplitude must be > 0");
  if (preamble.empty() || preamble.find_first_not_of('1') != std::string::npos)
    throw std::invalid_argument("modem: preamble must be non-empty and all ones");
  if (payload_len <= 0) throw std::invalid_argument("modem: payload_len must be > 0");
  if (gap < 0.0) throw std::invalid_argument("modem: gap must be >= 0");
}

Packet frame_packet(const std::string& payload, const ModemConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(payload.size()) != cfg.payload_len)
    throw std::invalid_argument("frame_packet: payload must be exactly " +
                                std::to_string(cfg.payload_len) + " bits");
  if (!is_bit_string(payload))
    throw std::invalid_argument("frame_packet: payload must contain only 0/1");
  return Packet{cfg.preamble, payload};
}

Waveform modulate(const std::vector<Packet>& packets, const ModemConfig& cfg) {
  cfg.validate();
  const int sps = cfg.samples_per_symbol();
  const int high_samples = static_cast<int>(std::llround(cfg.duty * sps));
  const int gap_samples = cfg.gap_samples();

  Waveform w;
  w.sample_rate = cfg.sample_rate;
  if (!packets.empty()) {
    const std::size_t per_packet = static_cast<std::size_t>(cfg.packet_bits()) * sps;
    w.samples.reserve(packets.size() * per_packet + (packets.size() - 1) * gap_samples);
  }

  for (std::size_t p = 0; p < packets.size(); ++p) {
    if (p > 0) w.samples.insert(w.samples.end(), gap_samples, 0.0);
    const std::string bits = packets[p].bits();
    if (static_cast<int>(bits.size()) != cfg.packet_bits() || !is_bit_string(bits))
      throw std::invalid_argument("modulate: packet bits do not match the framing config");
    for (char bit : bits) {
      if (bit == '1') {
        const int high = cfg.line_code == LineCode::RZ ? high_samples : sps;
        w.samples.insert(w.samples.end(), high, cfg.amplitude);
        w.samples.insert(w.samples.end(), sps - high, 0.0);
      } else {
        w.samples.insert(w.samples.end(), sps, 0.0);
      }
    }
  }
  return w;
}

Waveform amplifier_output(const Waveform& w, const AmplifierSpec& amp) {
  if (!(amp.supply_volts > 0.0))
    throw std::invalid_argument("amplifier: supply_volts must be > 0");
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  Waveform out = w;
  if (peak > 0.0) {
    const double scale = amp.supply_volts / peak;
    for (double& v : out.samples) v *= scale;
  }
  return out;
}

}  // namespace tmc
