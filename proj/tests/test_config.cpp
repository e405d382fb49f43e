#include <string>

#include "doctest.h"
#include "tmc/config.hpp"
#include "tmc/errors.hpp"

using namespace tmc;

namespace {

const char* kAluminumText = R"(
# through-metal bench setup
[material]
conductivity_s_per_m = 3.5e7
relative_permeability = 1.0
thickness_m = 0.007

[link]
v_transmit_v = 30
v_receive_min_v = 0.2

[modem]
symbol_rate_hz = 500
sample_rate_hz = 50000
payload = 0101101011001100

[channel]
pole_frequency_hz = 260
coupling_gain_ref = 0.05
noise_rms_v = 0.002
use_material = true

[geometry]
coplanar_m = unset
horizontal_m = 0.029
vertical_m = 0.017

[demod]
line_code = nrz
)";

}  // namespace

TEST_CASE("a full config file parses into typed sections") {
  const SystemConfig cfg = parse_config(kAluminumText);
  REQUIRE(cfg.material.has_value());
  CHECK(cfg.material->conductivity == doctest::Approx(3.5e7));
  CHECK(cfg.material->thickness == doctest::Approx(0.007));
  CHECK(cfg.link.v_transmit == doctest::Approx(30.0));
  CHECK(cfg.modem.symbol_rate == doctest::Approx(500.0));
  CHECK(cfg.channel.pole_frequency == doctest::Approx(260.0));
  CHECK(cfg.demod.line_code == LineCode::NRZ);
  CHECK_FALSE(cfg.geometry.coplanar_distance.has_value());
  CHECK(cfg.geometry.horizontal_offset == doctest::Approx(0.029));
  REQUIRE(cfg.material);
  CHECK(cfg.effective_channel().material.has_value());
}

TEST_CASE("unknown sections and keys are rejected with a location") {
  CHECK_THROWS_WITH_AS(parse_config("[warp_drive]\nflux = 1\n"),
                       doctest::Contains("unknown section"), ConfigError);
  try {
    parse_config("[modem]\nsymbol_rate_hz = 500\nchirp = 7\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown key 'chirp'") != std::string::npos);
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(parse_config("[modem]\nsymbol_rate_hz = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[channel]\nderivative_coupling = yes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[modem]\nsymbol_rate_hz 500\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("symbol_rate_hz = 500\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[coil]\nresistance_table = 100;3.0\n"), ConfigError);
}

TEST_CASE("cross-field validation runs after parsing") {
  // Payload length disagrees with payload_bits.
  CHECK_THROWS_AS(parse_config("[modem]\npayload = 0101\n"), ConfigError);
  // Sample rate not a multiple of the symbol rate.
  CHECK_THROWS_AS(parse_config("[modem]\nsymbol_rate_hz = 600\n"), std::invalid_argument);
}

TEST_CASE("set and get address keys by section.key") {
  SystemConfig cfg = default_config();
  config_set(cfg, "channel.noise_rms_v", "0.0035");
  CHECK(cfg.channel.noise_rms == doctest::Approx(0.0035));
  CHECK(config_get(cfg, "channel.noise_rms_v") == "0.0035000000000000001");
  CHECK_THROWS_AS(config_set(cfg, "channel.warp", "1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "no_dot", "1"), ConfigError);

  config_set(cfg, "geometry.coplanar_m", "unset");
  CHECK_FALSE(cfg.geometry.coplanar_distance.has_value());
}

TEST_CASE("serialization round-trips through the parser") {
  const SystemConfig cfg = parse_config(kAluminumText);
  const std::string canon = serialize_config(cfg);
  const SystemConfig back = parse_config(canon);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(serialize_config(back) == canon);
}

TEST_CASE("hashes identify presets") {
  const SystemConfig a = parse_config(kAluminumText);
  SystemConfig b = parse_config(kAluminumText);
  CHECK(config_hash(a) == config_hash(b));
  config_set(b, "channel.noise_rms_v", "0.004");
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("supply current interpolation between the measured anchors") {
  const SystemConfig cfg = default_config();
  CHECK(cfg.drive_current_for(8.0) == doctest::Approx(0.225));
  CHECK(cfg.drive_current_for(15.0) == doctest::Approx(0.3));
  CHECK(cfg.drive_current_for(11.5) == doctest::Approx(0.2625));
  CHECK(cfg.drive_current_for(20.0) == doctest::Approx(0.3));
}

TEST_CASE("material is only attached when enabled") {
  SystemConfig cfg = parse_config(kAluminumText);
  CHECK(cfg.effective_channel().material.has_value());
  config_set(cfg, "channel.use_material", "false");
  CHECK_FALSE(cfg.effective_channel().material.has_value());
}
