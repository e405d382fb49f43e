#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <random>
#include <set>

#include "doctest.h"
#include "tmc/modem.hpp"

using namespace tmc;

namespace {

ModemConfig default_cfg() {
  ModemConfig cfg;
  cfg.symbol_rate = 500.0;
  cfg.sample_rate = 50000.0;
  return cfg;
}

constexpr const char* kPayload = "0101101011001100";

}  // namespace

TEST_CASE("framing prepends the synchronization preamble") {
  const Packet p = frame_packet(kPayload, default_cfg());
  CHECK(p.bits() == "11110101101011001100");
  CHECK(p.bits().size() == 20);

  const Packet zeros = frame_packet(std::string(16, '0'), default_cfg());
  CHECK(zeros.bits() == "1111" + std::string(16, '0'));
}

TEST_CASE("framing rejects bad payloads") {
  CHECK_THROWS_AS(frame_packet("010110101100110", default_cfg()), std::invalid_argument);
  CHECK_THROWS_AS(frame_packet("0101101011001102", default_cfg()), std::invalid_argument);
}

TEST_CASE("RZ encoding of a raw two-bit pattern") {
  ModemConfig cfg = default_cfg();
  cfg.symbol_rate = 500.0;
  cfg.sample_rate = 10000.0;
  cfg.preamble = "1";
  cfg.payload_len = 1;
  const Waveform w = modulate({Packet{"1", "0"}}, cfg);
  REQUIRE(w.samples.size() == 40);
  for (int i = 0; i < 10; ++i) CHECK(w.samples[i] == 1.0);
  for (int i = 10; i < 40; ++i) CHECK(w.samples[i] == 0.0);
}

TEST_CASE("NRZ holds the whole symbol high") {
  ModemConfig cfg = default_cfg();
  cfg.sample_rate = 10000.0;
  cfg.line_code = LineCode::NRZ;
  cfg.preamble = "1";
  cfg.payload_len = 1;
  const Waveform w = modulate({Packet{"1", "1"}}, cfg);
  REQUIRE(w.samples.size() == 40);
  for (double v : w.samples) CHECK(v == 1.0);
}

TEST_CASE("packet interval is silence of round(gap * sample_rate) samples") {
  ModemConfig cfg = default_cfg();  // 50k samples/s, 200 us gap
  CHECK(cfg.gap_samples() == 10);
  const Packet p = frame_packet(kPayload, cfg);
  const Waveform w = modulate({p, p}, cfg);
  const int sps = cfg.samples_per_symbol();
  const std::size_t per_packet = 20 * sps;
  CHECK(w.samples.size() == 2 * per_packet + 10);
  for (std::size_t i = per_packet; i < per_packet + 10; ++i) CHECK(w.samples[i] == 0.0);

  cfg.sample_rate = 10000.0;
  CHECK(cfg.gap_samples() == 2);
}

TEST_CASE("sample count follows the framing arithmetic") {
  ModemConfig cfg = default_cfg();
  const Packet p = frame_packet(kPayload, cfg);
  for (int n : {1, 3, 7}) {
    const Waveform w = modulate(std::vector<Packet>(n, p), cfg);
    const std::size_t want = static_cast<std::size_t>(n) * 20 * cfg.samples_per_symbol() +
                             static_cast<std::size_t>(n - 1) * cfg.gap_samples();
    CHECK(w.samples.size() == want);
  }
}

TEST_CASE("RZ packet mean is amplitude * duty * ones / bits") {
  ModemConfig cfg = default_cfg();
  cfg.amplitude = 2.5;
  const Packet p = frame_packet(kPayload, cfg);  // 12 ones of 20 bits
  const Waveform w = modulate({p}, cfg);
  double mean = 0.0;
  for (double v : w.samples) mean += v;
  mean /= static_cast<double>(w.samples.size());
  CHECK(std::abs(mean - cfg.amplitude * cfg.duty * 12.0 / 20.0) < 1e-12);
}

TEST_CASE("modulation is injective on packet sequences") {
  ModemConfig cfg = default_cfg();
  cfg.sample_rate = 5000.0;  // keep the waveforms short
  std::mt19937 rng(99);
  std::set<std::vector<double>> seen;
  std::set<std::string> streams;
  for (int i = 0; i < 60; ++i) {
    std::string payload;
    for (int b = 0; b < cfg.payload_len; ++b) payload.push_back(rng() & 1 ? '1' : '0');
    std::string payload2;
    for (int b = 0; b < cfg.payload_len; ++b) payload2.push_back(rng() & 1 ? '1' : '0');
    if (!streams.insert(payload + payload2).second) continue;
    const Waveform w =
        modulate({frame_packet(payload, cfg), frame_packet(payload2, cfg)}, cfg);
    CHECK(seen.insert(w.samples).second);
  }
}

TEST_CASE("switching amplifier rescales to the supply rail") {
  ModemConfig cfg = default_cfg();
  const Waveform unit = modulate({frame_packet(kPayload, cfg)}, cfg);

  const AmplifierSpec low{8.0, 0.225};
  const Waveform w8 = amplifier_output(unit, low);
  double peak = 0.0;
  for (double v : w8.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(8.0));
  CHECK(low.power_watts() == doctest::Approx(1.8));

  const AmplifierSpec high{15.0, 0.3};
  const Waveform w15 = amplifier_output(unit, high);
  peak = 0.0;
  for (double v : w15.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(15.0));
  CHECK(high.power_watts() == doctest::Approx(4.5));
}

TEST_CASE("amplifier passes silence through") {
  Waveform silence;
  silence.sample_rate = 1000.0;
  silence.samples.assign(100, 0.0);
  const Waveform out = amplifier_output(silence, AmplifierSpec{8.0, 0.225});
  for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("waveform CSV round trip") {
  ModemConfig cfg = default_cfg();
  cfg.sample_rate = 10000.0;
  cfg.amplitude = 1.2345678912345;
  const Waveform w = modulate({frame_packet(kPayload, cfg)}, cfg);
  const std::string path = "modem_roundtrip.csv";
  save_waveform_csv(w, path);
  const Waveform back = load_waveform_csv(path);
  std::remove(path.c_str());
  REQUIRE(back.samples.size() == w.samples.size());
  CHECK(back.sample_rate == w.sample_rate);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(back.samples[i] == doctest::Approx(w.samples[i]).epsilon(1e-11));
  }
}

TEST_CASE("modem config invariants") {
  ModemConfig cfg = default_cfg();
  cfg.sample_rate = 50001.0;  // not divisible
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_cfg();
  cfg.duty = 1.0 / 3.0;  // 100/3 is not an integer sample count
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_cfg();
  cfg.preamble = "1011";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_cfg();
  cfg.gap = -1e-6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
