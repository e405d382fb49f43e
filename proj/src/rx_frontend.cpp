#include "tmc/rx_frontend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "tmc/errors.hpp"

namespace tmc {

void AdcConfig::validate() const {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("adc: sample_rate must be > 0");
  if (resolution_bits < 1 || resolution_bits > 24)
    throw std::invalid_argument("adc: resolution_bits out of range");
  if (!(v_ref > 0.0)) throw std::invalid_argument("adc: v_ref must be > 0");
  if (buffer_len < 1) throw std::invalid_argument("adc: buffer_len must be >= 1");
  if (loss_per_flush < 0 || loss_per_flush >= buffer_len)
    throw std::invalid_argument("adc: loss_per_flush must be in [0, buffer_len)");
}

void AmpConfig::validate() const {
  if (!(gain > 0.0)) throw std::invalid_argument("rx amp: gain must be > 0");
  if (!(saturation > 0.0)) throw std::invalid_argument("rx amp: saturation must be > 0");
}

std::vector<double> QuantizedCapture::to_volts() const {
  std::vector<double> out(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) out[i] = volts(i);
  return out;
}

Waveform amplify(const Waveform& w, const AmpConfig& amp) {
  amp.validate();
  Waveform out = w;
  for (double& v : out.samples) {
    v = std::clamp(v * amp.gain, -amp.saturation, amp.saturation);
  }
  return out;
}

QuantizedCapture adc_sample(const Waveform& w, const AdcConfig& cfg) {
  cfg.validate();
  w.validate();
  const double ratio = w.sample_rate / cfg.sample_rate;
  const long long stride = std::llround(ratio);
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9)
    throw ConfigError("adc_sample: input rate must be an integer multiple of the ADC rate");

  QuantizedCapture cap;
  cap.sample_rate = cfg.sample_rate;
  cap.resolution_bits = cfg.resolution_bits;
  cap.v_ref = cfg.v_ref;
  const int top = (1 << cfg.resolution_bits) - 1;
  const double lsb = cfg.lsb();
  cap.codes.reserve(w.samples.size() / stride + 1);
  for (std::size_t i = 0; i < w.samples.size(); i += stride) {
    const long long code = std::llround(w.samples[i] / lsb);
    cap.codes.push_back(static_cast<int>(std::clamp(code, 0LL, static_cast<long long>(top))));
  }
  return cap;
}

QuantizedCapture apply_sample_loss(const QuantizedCapture& capture, const AdcConfig& cfg,
                                   std::uint64_t seed) {
  cfg.validate();
  QuantizedCapture out = capture;
  out.codes.clear();
  out.gap_positions.clear();
  if (cfg.loss_per_flush == 0) {
    out.codes = capture.codes;
    return out;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> jitter(-10, 10);

  const std::size_t n = capture.codes.size();
  const std::size_t cycle = static_cast<std::size_t>(cfg.buffer_len);
  const std::size_t loss = static_cast<std::size_t>(cfg.loss_per_flush);
  std::size_t pos = 0;
  while (pos + cycle <= n) {
    // Deletion nominally removes the cycle's final samples; jitter shifts it.
    long long start = static_cast<long long>(pos + cycle - loss) + jitter(rng);
    start = std::clamp<long long>(start, static_cast<long long>(pos),
                                  static_cast<long long>(pos + cycle - loss));
    for (std::size_t i = pos; i < static_cast<std::size_t>(start); ++i)
      out.codes.push_back(capture.codes[i]);
    out.gap_positions.push_back(out.codes.size());
    for (std::size_t i = static_cast<std::size_t>(start) + loss; i < pos + cycle; ++i)
      out.codes.push_back(capture.codes[i]);
    pos += cycle;
  }
  for (std::size_t i = pos; i < n; ++i) out.codes.push_back(capture.codes[i]);
  return out;
}

void save_capture_csv(const QuantizedCapture& capture, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# sample_rate_hz=" << static_cast<long long>(std::llround(capture.sample_rate))
      << "\n";
  out << "# v_ref=" << capture.v_ref << "\n";
  out << "# bits=" << capture.resolution_bits << "\n";
  for (std::size_t g : capture.gap_positions) out << "# gap_at=" << g << "\n";
  for (int code : capture.codes) out << code << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

QuantizedCapture load_capture_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  QuantizedCapture cap;
  cap.offset_volts = 0.0;
  bool have_rate = false, have_vref = false, have_bits = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto value_of = [&line](const std::string& key) { return line.substr(key.size()); };
      if (line.rfind("# sample_rate_hz=", 0) == 0) {
        cap.sample_rate = std::stod(value_of("# sample_rate_hz="));
        have_rate = true;
      } else if (line.rfind("# v_ref=", 0) == 0) {
        cap.v_ref = std::stod(value_of("# v_ref="));
        have_vref = true;
      } else if (line.rfind("# bits=", 0) == 0) {
        cap.resolution_bits = std::stoi(value_of("# bits="));
        have_bits = true;
      } else if (line.rfind("# gap_at=", 0) == 0) {
        cap.gap_positions.push_back(std::stoull(value_of("# gap_at=")));
      }
      continue;
    }
    cap.codes.push_back(std::stoi(line));
  }
  if (!have_rate || !have_vref || !have_bits)
    throw std::runtime_error(path + ": missing capture header lines");
  // Captures store unipolar codes; reconstruction re-centers at midscale.
  cap.offset_volts = cap.v_ref / 2.0;
  return cap;
}

}  // namespace tmc
