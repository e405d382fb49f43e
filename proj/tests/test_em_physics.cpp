#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "tmc/em_physics.hpp"
#include "tmc/errors.hpp"

using namespace tmc;

namespace {

const MaterialSpec kAluminum{3.5e7, 1.0, 7e-3};

CoilParams paper_coil() {
  CoilParams c;
  c.inductance = 15e-3;
  c.resistance_table = {{1000.0, 3.369}};
  c.diameter = 0.095;
  c.loop_area = 3.14159265358979323846 * 0.095 * 0.095 / 4.0;
  return c;
}

}  // namespace

TEST_CASE("skin depth closed form") {
  CHECK(skin_depth(kAluminum, 1000.0) == doctest::Approx(2.69e-3).epsilon(0.01));
  CHECK(skin_depth(kAluminum, 3700.0) == doctest::Approx(1.40e-3).epsilon(0.01));
}

TEST_CASE("skin depth square-root law") {
  const double d1 = skin_depth(kAluminum, 700.0);
  const double d4 = skin_depth(kAluminum, 2800.0);
  CHECK(d4 == doctest::Approx(d1 / 2.0).epsilon(1e-12));
}

TEST_CASE("skin depth rejects non-positive frequency") {
  CHECK_THROWS_AS(skin_depth(kAluminum, 0.0), std::domain_error);
  CHECK_THROWS_AS(skin_depth(kAluminum, -5.0), std::domain_error);
}

TEST_CASE("skin depth decreases with frequency and conductivity") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> logf(1.0, 5.0), logs(5.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    MaterialSpec m = kAluminum;
    m.conductivity = std::pow(10.0, logs(rng));
    const double f1 = std::pow(10.0, logf(rng));
    const double f2 = f1 * (1.0 + 0.5 * std::generate_canonical<double, 32>(rng));
    CHECK(skin_depth(m, f2) < skin_depth(m, f1));
    MaterialSpec m2 = m;
    m2.conductivity *= 2.0;
    CHECK(skin_depth(m2, f1) < skin_depth(m, f1));
  }
}

TEST_CASE("skin depth * sqrt(f) is frequency invariant") {
  const double ref = skin_depth(kAluminum, 100.0) * std::sqrt(100.0);
  for (double f : {10.0, 55.0, 1234.0, 9.87e4, 3.3e6}) {
    CHECK(skin_depth(kAluminum, f) * std::sqrt(f) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("attenuation matches the aluminum link budget") {
  // 0.2 V out of 30 V in, the working point behind the 3.7 kHz limit.
  CHECK(attenuation_factor(kAluminum, 3700.0) == doctest::Approx(0.2 / 30.0).epsilon(0.02));
  CHECK(attenuation_factor(kAluminum, 500.0) == doctest::Approx(0.159).epsilon(0.02));
}

TEST_CASE("zero thickness does not attenuate") {
  MaterialSpec none = kAluminum;
  none.thickness = 0.0;
  CHECK(attenuation_factor(none, 123.0) == 1.0);
}

TEST_CASE("attenuation decreases with frequency and thickness") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> logf(1.0, 4.0), thick(1e-4, 0.02);
  for (int i = 0; i < 200; ++i) {
    MaterialSpec m = kAluminum;
    m.thickness = thick(rng);
    const double f1 = std::pow(10.0, logf(rng));
    CHECK(attenuation_factor(m, f1 * 2.0) < attenuation_factor(m, f1));
    MaterialSpec m2 = m;
    m2.thickness *= 1.5;
    CHECK(attenuation_factor(m2, f1) < attenuation_factor(m, f1));
  }
}

TEST_CASE("maximum carrier frequency reproduces the prototype number") {
  const LinkBudget budget{30.0, 0.2};
  CHECK(max_carrier_frequency(kAluminum, budget) == doctest::Approx(3700.0).epsilon(0.02));
}

TEST_CASE("maximum carrier frequency degenerate and scaling laws") {
  CHECK(max_carrier_frequency(kAluminum, LinkBudget{5.0, 5.0}) == 0.0);
  const LinkBudget budget{30.0, 0.2};
  MaterialSpec thick = kAluminum;
  thick.thickness *= 2.0;
  CHECK(max_carrier_frequency(thick, budget) ==
        doctest::Approx(max_carrier_frequency(kAluminum, budget) / 4.0).epsilon(1e-12));
}

TEST_CASE("attenuation at the maximum carrier equals the budget ratio") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> logs(5.0, 8.0), mu(1.0, 500.0), thick(1e-4, 0.03);
  std::uniform_real_distribution<double> logratio(0.1, 8.0), vr(0.01, 2.0);
  for (int i = 0; i < 1000; ++i) {
    MaterialSpec m;
    m.conductivity = std::pow(10.0, logs(rng));
    m.relative_permeability = mu(rng);
    m.thickness = thick(rng);
    LinkBudget b;
    b.v_receive_min = vr(rng);
    b.v_transmit = b.v_receive_min * std::exp(logratio(rng));
    const double fc = max_carrier_frequency(m, b);
    const double want = b.v_receive_min / b.v_transmit;
    CHECK(attenuation_factor(m, fc) == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("series impedance with and without the resonance capacitor") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  CHECK(std::abs(series_impedance(lc, 500.0)) == doctest::Approx(3.37).epsilon(0.01));

  SeriesCircuit plain{paper_coil(), std::nullopt};
  CHECK(std::abs(series_impedance(plain, 500.0)) == doctest::Approx(47.24).epsilon(0.01));
}

TEST_CASE("series capacitor blocks DC") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  CHECK(series_impedance(lc, 1e-6).imag() < -1e9);
  CHECK_THROWS_AS(series_impedance(lc, 0.0), std::domain_error);
}

TEST_CASE("series impedance needs a resistance table") {
  SeriesCircuit empty;
  empty.coil.inductance = 15e-3;
  CHECK_THROWS_AS(series_impedance(empty, 500.0), ConfigError);
}

TEST_CASE("resistance table interpolation clamps at the ends") {
  CoilParams c = paper_coil();
  c.resistance_table = {{100.0, 3.0}, {1000.0, 3.369}};
  CHECK(c.resistance_at(100.0) == doctest::Approx(3.0));
  CHECK(c.resistance_at(550.0) == doctest::Approx(3.0 + 0.369 * 0.5));
  CHECK(c.resistance_at(10.0) == doctest::Approx(3.0));
  CHECK(c.resistance_at(5000.0) == doctest::Approx(3.369));
}

TEST_CASE("resonant frequency of the prototype circuits") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  CHECK(resonant_frequency(lc) == doctest::Approx(500.0).epsilon(1.0 / 500.0));

  SeriesCircuit in_pipe = lc;
  in_pipe.coil.inductance = 12e-3;
  CHECK(resonant_frequency(in_pipe) == doctest::Approx(559.0).epsilon(1.0 / 559.0));
}

TEST_CASE("resonance scaling and preconditions") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  SeriesCircuit lc4 = lc;
  lc4.coil.inductance *= 4.0;
  CHECK(resonant_frequency(lc4) == doctest::Approx(resonant_frequency(lc) / 2.0).epsilon(1e-12));
  SeriesCircuit plain{paper_coil(), std::nullopt};
  CHECK_THROWS_AS(resonant_frequency(plain), std::domain_error);
}

TEST_CASE("impedance minimum sits at resonance on a log grid") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  const double f_res = resonant_frequency(lc);
  const int n = 400;
  double best_f = 0.0, best = 1e300;
  for (int i = 0; i < n; ++i) {
    const double f = 50.0 * std::pow(5000.0 / 50.0, static_cast<double>(i) / (n - 1));
    const double z = std::abs(series_impedance(lc, f));
    if (z < best) {
      best = z;
      best_f = f;
    }
  }
  const double step = std::pow(5000.0 / 50.0, 1.0 / (n - 1));
  CHECK(best_f / f_res < step * 1.0001);
  CHECK(f_res / best_f < step * 1.0001);
}

TEST_CASE("removing the capacitor flattens the 100-500 Hz impedance swing") {
  SeriesCircuit lc{paper_coil(), 6.75e-6};
  SeriesCircuit plain{paper_coil(), std::nullopt};
  auto fold_change = [](const SeriesCircuit& c) {
    const double z1 = std::abs(series_impedance(c, 100.0));
    const double z2 = std::abs(series_impedance(c, 500.0));
    return std::max(z1, z2) / std::min(z1, z2);
  };
  CHECK(fold_change(plain) < fold_change(lc));
}

TEST_CASE("metal loading of the coil") {
  CoilParams air = paper_coil();
  const CoilParams loaded = coil_in_pipe(air);
  CHECK(loaded.inductance == doctest::Approx(12e-3));
  CHECK(loaded.resistance_at(1000.0) == doctest::Approx(5.025).epsilon(0.01));
}

TEST_CASE("metal loading leaves DC resistance unchanged") {
  CoilParams air = paper_coil();
  air.resistance_table = {{0.0, 3.0}, {1000.0, 3.369}};
  const CoilParams loaded = coil_in_pipe(air);
  CHECK(loaded.resistance_table.front().second == doctest::Approx(3.0));
}

TEST_CASE("coil validation catches inconsistent loop area") {
  CoilParams c = paper_coil();
  c.loop_area *= 1.05;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
