#include "tmc/waveform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tmc {

void Waveform::validate() const {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("waveform: sample_rate must be > 0");
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("waveform: non-finite sample");
  }
}

void save_waveform_csv(const Waveform& w, const std::string& path) {
  w.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# sample_rate_hz=" << static_cast<long long>(std::llround(w.sample_rate)) << "\n";
  char buf[48];
  for (double v : w.samples) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Waveform load_waveform_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Waveform w;
  std::string line;
  bool have_rate = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# sample_rate_hz=";
      if (line.rfind(key, 0) == 0) {
        w.sample_rate = std::stod(line.substr(key.size()));
        have_rate = true;
      }
      continue;
    }
    w.samples.push_back(std::stod(line));
  }
  if (!have_rate) throw std::runtime_error(path + ": missing sample_rate_hz header");
  w.validate();
  return w;
}

}  // namespace tmc
