#include "tmc/demod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tmc/errors.hpp"

namespace tmc {

int DemodConfig::samples_per_symbol() const {
  return static_cast<int>(std::llround(sample_rate / symbol_rate));
}

int DemodConfig::template_samples() const {
  return static_cast<int>(preamble.size()) * samples_per_symbol();
}

int DemodConfig::search_window() const {
  return 24 * samples_per_symbol() + 10;
}

void DemodConfig::validate() const {
  if (!(symbol_rate > 0.0) || !(sample_rate > 0.0))
    throw std::invalid_argument("demod: rates must be > 0");
  const double ratio = sample_rate / symbol_rate;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9 || std::llround(ratio) < 2)
    throw std::invalid_argument("demod: sample_rate must be an integer multiple (>= 2) of symbol_rate");
  if (preamble.empty() || preamble.find_first_not_of('1') != std::string::npos)
    throw std::invalid_argument("demod: preamble must be non-empty and all ones");
  if (payload_len <= 0) throw std::invalid_argument("demod: payload_len must be > 0");
  if (movavg_window_symbols < 1)
    throw std::invalid_argument("demod: movavg_window_symbols must be >= 1");
  if (!(ones_fraction > 0.0) || !(ones_fraction <= 1.0))
    throw std::invalid_argument("demod: ones_fraction must be in (0, 1]");
  if (!(duty > 0.0) || !(duty < 1.0)) throw std::invalid_argument("demod: duty must be in (0, 1)");
  if (gap < 0.0) throw std::invalid_argument("demod: gap must be >= 0");
}

void BerReport::add(const BerReport& fragment) {
  bits_compared += fragment.bits_compared;
  bit_errors += fragment.bit_errors;
  ber_defined = bits_compared > 0;
  ber = ber_defined ? static_cast<double>(bit_errors) / static_cast<double>(bits_compared)
                    : 0.0;
}

std::vector<double> preprocess(std::span<const double> samples, const DemodConfig& cfg) {
  cfg.validate();
  const std::size_t n = samples.size();
  const std::size_t window =
      static_cast<std::size_t>(cfg.movavg_window_symbols) * cfg.samples_per_symbol();
  if (n < window)
    throw DecodeError("preprocess: input shorter than the moving-average window");

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + samples[i];

  const double duty_eff = cfg.line_code == LineCode::RZ ? cfg.duty : 1.0;
  const double scale = 1.0 / (2.0 * cfg.ones_fraction * duty_eff);
  const std::size_t half = window / 2;

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > half ? i - half : 0;
    const std::size_t hi = std::min(n, i + (window - half));
    const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    out[i] = samples[i] - mean * scale;
  }
  return out;
}

namespace {

double robust_peak(std::span<const double> samples) {
  std::vector<double> mag(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) mag[i] = std::abs(samples[i]);
  const std::size_t idx = static_cast<std::size_t>(0.95 * (mag.size() - 1));
  std::nth_element(mag.begin(), mag.begin() + idx, mag.end());
  return mag[idx];
}

std::vector<double> build_template(const DemodConfig& cfg, double amplitude) {
  const int sps = cfg.samples_per_symbol();
  const int high = cfg.line_code == LineCode::RZ
                       ? static_cast<int>(std::llround(cfg.duty * sps))
                       : sps;
  std::vector<double> t;
  t.reserve(cfg.preamble.size() * sps);
  for (std::size_t b = 0; b < cfg.preamble.size(); ++b) {
    t.insert(t.end(), high, amplitude);
    t.insert(t.end(), sps - high, -amplitude);
  }
  return t;
}

}  // namespace

PreambleMatch detect_preamble(std::span<const double> preprocessed, const DemodConfig& cfg) {
  cfg.validate();
  const std::size_t tlen = static_cast<std::size_t>(cfg.template_samples());
  if (preprocessed.size() < tlen)
    throw DecodeError("detect_preamble: window shorter than the preamble template");

  const std::vector<double> t = build_template(cfg, robust_peak(preprocessed));
  PreambleMatch best;
  best.distance = std::numeric_limits<double>::infinity();
  const std::size_t last = preprocessed.size() - tlen;
  for (std::size_t k = 0; k <= last; ++k) {
    double d = 0.0;
    for (std::size_t j = 0; j < tlen; ++j) {
      const double e = preprocessed[k + j] - t[j];
      d += e * e;
    }
    if (d < best.distance) {
      best.distance = d;
      best.offset = k;
    }
  }
  return best;
}

std::string decide_symbols(std::span<const double> preprocessed, std::size_t start,
                           int bit_count, const DemodConfig& cfg) {
  cfg.validate();
  const int sps = cfg.samples_per_symbol();
  const int window = cfg.line_code == LineCode::RZ
                         ? static_cast<int>(std::llround(cfg.duty * sps))
                         : sps;
  std::string bits;
  bits.reserve(bit_count);
  for (int b = 0; b < bit_count; ++b) {
    const std::size_t base = start + static_cast<std::size_t>(b) * sps;
    if (base + window > preprocessed.size())
      throw DecodeError("decide_symbols: packet truncated", bits);
    double mean = 0.0;
    for (int j = 0; j < window; ++j) mean += preprocessed[base + j];
    mean /= window;
    bits.push_back(mean > cfg.decision_threshold ? '1' : '0');
  }
  return bits;
}

BerReport compute_ber(const std::string& decoded, const std::string& expected) {
  if (decoded.size() != expected.size())
    throw std::invalid_argument("compute_ber: length mismatch");
  BerReport fragment;
  fragment.bits_compared = static_cast<long long>(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if (decoded[i] != expected[i]) ++fragment.bit_errors;
  }
  fragment.ber_defined = fragment.bits_compared > 0;
  fragment.ber = fragment.ber_defined ? static_cast<double>(fragment.bit_errors) /
                                            static_cast<double>(fragment.bits_compared)
                                      : 0.0;
  return fragment;
}

BerReport demodulate_stream(std::span<const double> samples, const DemodConfig& cfg,
                            const std::string& expected_payload,
                            std::vector<PacketDecode>* decodes) {
  cfg.validate();
  if (static_cast<int>(expected_payload.size()) != cfg.payload_len)
    throw std::invalid_argument("demodulate_stream: expected payload length mismatch");

  const std::vector<double> pp = preprocess(samples, cfg);
  const std::size_t n = pp.size();
  const int sps = cfg.samples_per_symbol();
  const std::size_t tlen = static_cast<std::size_t>(cfg.template_samples());
  const std::size_t window = static_cast<std::size_t>(cfg.search_window());
  const std::size_t packet_samples =
      static_cast<std::size_t>(cfg.preamble.size() + cfg.payload_len) * sps;
  const std::size_t gap_samples =
      static_cast<std::size_t>(std::llround(cfg.gap * cfg.sample_rate));
  // Re-acquisition slack: lets the next search start slightly before the
  // nominal packet start so that dropped samples never push the preamble out
  // of the window.
  const std::size_t slack = 16;
  // Capping the span below one packet period keeps a window from containing
  // two complete preambles, even after slack-sized sample loss.
  const std::size_t span_cap = packet_samples + gap_samples + tlen - 1 - slack;

  BerReport report;
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t span = std::min({window, span_cap, n - pos});
    if (span < tlen) break;
    const PreambleMatch match =
        detect_preamble(std::span<const double>(pp.data() + pos, span), cfg);
    const std::size_t start = pos + match.offset;
    if (start + packet_samples > n) break;

    const std::string bits =
        decide_symbols(pp, start + cfg.preamble.size() * sps, cfg.payload_len, cfg);
    report.add(compute_ber(bits, expected_payload));
    ++report.packets_found;
    if (decodes) decodes->push_back({start, bits, match.distance});

    const std::size_t next = start + packet_samples + gap_samples;
    pos = next > slack ? next - slack : start + 1;
    if (pos <= start) pos = start + 1;
  }
  report.ber_defined = report.packets_found > 0 && report.bits_compared > 0;
  return report;
}

}  // namespace tmc
