#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tmc {

/// Uniformly sampled voltage sequence; the currency between all stages.
struct Waveform {
  double sample_rate = 0.0;  // samples/s
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const {
    return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }

  // Throws std::invalid_argument on non-positive rate or non-finite samples.
  void validate() const;
};

// CSV layout: one "# sample_rate_hz=<int>" header line, then one voltage
// per line with at least 9 significant digits.
void save_waveform_csv(const Waveform& w, const std::string& path);
Waveform load_waveform_csv(const std::string& path);

}  // namespace tmc
