#include "tmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fft.hpp"
#include "tmc/errors.hpp"

namespace tmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  h = splitmix64(h ^ d);
  return h;
}

namespace {

double adc_rate_for(const SystemConfig& sys, double symbol_rate) {
  if (!sys.experiment.adc_auto_rate) return sys.adc.sample_rate;
  return symbol_rate < 1000.0 ? 10000.0 : 50000.0;
}

}  // namespace

ChainResult run_chain(const SystemConfig& sys, double symbol_rate, const Geometry& g,
                      double supply_volts, std::uint64_t trial_seed, int packets) {
  ModemConfig modem = sys.modem;
  modem.symbol_rate = symbol_rate;
  modem.validate();

  const Packet packet = frame_packet(sys.payload, modem);
  const std::vector<Packet> train(static_cast<std::size_t>(packets), packet);

  ChainResult result;
  const AmplifierSpec amp{supply_volts, sys.drive_current_for(supply_volts)};
  result.tx = amplifier_output(modulate(train, modem), amp);

  ChannelModel ch = sys.effective_channel();
  ch.seed = mix_seed(trial_seed, 0x6368);  // noise stream
  result.received = apply_channel(result.tx, ch, g);

  AdcConfig adc = sys.adc;
  adc.sample_rate = adc_rate_for(sys, symbol_rate);
  AmpConfig rx_amp = sys.rx_amp;
  if (sys.rx_auto_gain) {
    double peak = 0.0;
    for (double v : result.received.samples) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) rx_amp.gain = sys.rx_auto_gain_target / peak;
  }
  Waveform lifted = amplify(result.received, rx_amp);
  for (double& v : lifted.samples) v += adc.v_ref / 2.0;
  QuantizedCapture capture = adc_sample(lifted, adc);
  capture.offset_volts = adc.v_ref / 2.0;
  result.capture = apply_sample_loss(capture, adc, mix_seed(trial_seed, 0x6c6f));

  DemodConfig demod;
  demod.symbol_rate = symbol_rate;
  demod.sample_rate = adc.sample_rate;
  demod.preamble = modem.preamble;
  demod.payload_len = modem.payload_len;
  demod.line_code = sys.demod.line_code;
  demod.movavg_window_symbols = sys.demod.movavg_window_symbols;
  demod.ones_fraction = sys.demod.ones_fraction;
  demod.decision_threshold = sys.demod.decision_threshold;
  demod.duty = modem.duty;
  demod.gap = modem.gap;

  const std::vector<double> volts = result.capture.to_volts();
  result.report = demodulate_stream(volts, demod, sys.payload);
  return result;
}

std::vector<ResultRow> run_experiment(const SystemConfig& sys) {
  sys.validate();
  const ExperimentPlan& plan = sys.experiment;

  std::vector<double> rates = plan.symbol_rates;
  if (rates.empty()) rates.push_back(sys.modem.symbol_rate);
  std::sort(rates.begin(), rates.end());

  std::vector<Geometry> geometries;
  if (!plan.horizontal_sweep.empty()) {
    for (double h : plan.horizontal_sweep) {
      Geometry g;
      g.horizontal_offset = h;
      g.vertical_offset = sys.geometry.vertical_offset;
      geometries.push_back(g);
    }
  } else if (!plan.coplanar_sweep.empty()) {
    for (double d : plan.coplanar_sweep) {
      Geometry g;
      g.coplanar_distance = d;
      geometries.push_back(g);
    }
  } else {
    geometries.push_back(sys.geometry);
  }
  std::sort(geometries.begin(), geometries.end(),
            [](const Geometry& a, const Geometry& b) { return separation(a) < separation(b); });

  std::vector<double> supplies = plan.supply_sweep;
  if (supplies.empty()) supplies.push_back(sys.amplifier.supply_volts);
  std::sort(supplies.begin(), supplies.end());

  std::vector<ResultRow> rows;
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    for (std::size_t gi = 0; gi < geometries.size(); ++gi) {
      for (std::size_t si = 0; si < supplies.size(); ++si) {
        ResultRow row;
        row.symbol_rate = rates[ri];
        row.separation_m = separation(geometries[gi]);
        row.supply_volts = supplies[si];
        row.trials = plan.trials;
        row.packets_sent =
            static_cast<long long>(plan.trials) * plan.packets_per_trial;
        try {
          row.power_watts = supplies[si] * sys.drive_current_for(supplies[si]);
          std::vector<double> bers;
          bers.reserve(plan.trials);
          for (int t = 0; t < plan.trials; ++t) {
            const std::uint64_t seed = mix_seed(plan.seed, ri, gi, si,
                                                static_cast<std::uint64_t>(t));
            const ChainResult r = run_chain(sys, rates[ri], geometries[gi], supplies[si],
                                            seed, plan.packets_per_trial);
            row.packets_found += r.report.packets_found;
            if (r.report.ber_defined) bers.push_back(r.report.ber);
            if (t == 0) {
              const auto spectrum = estimate_spectrum(r.received);
              row.inband_power_fraction = power_fraction_below(spectrum, rates[ri]);
            }
          }
          if (bers.empty()) {
            row.status = "no_packets";
            row.mean_ber = std::numeric_limits<double>::quiet_NaN();
            row.ber_stddev = std::numeric_limits<double>::quiet_NaN();
          } else {
            double mean = 0.0;
            for (double b : bers) mean += b;
            mean /= static_cast<double>(bers.size());
            double var = 0.0;
            for (double b : bers) var += (b - mean) * (b - mean);
            var = bers.size() > 1 ? var / static_cast<double>(bers.size() - 1) : 0.0;
            row.mean_ber = mean;
            row.ber_stddev = std::sqrt(var);
          }
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
          row.mean_ber = std::numeric_limits<double>::quiet_NaN();
          row.ber_stddev = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "symbol_rate_hz,separation_m,supply_v,power_w,trials,packets_sent,"
      "packets_found,mean_ber,ber_stddev,inband_power_fraction,status\n";
  char buf[256];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%d,%lld,%lld,%.9g,%.9g,%.9g,",
                  r.symbol_rate, r.separation_m, r.supply_volts, r.power_watts, r.trials,
                  r.packets_sent, r.packets_found, r.mean_ber, r.ber_stddev,
                  r.inband_power_fraction);
    out += buf;
    out += r.status;
    out += "\n";
  }
  return out;
}

std::vector<std::pair<double, double>> estimate_spectrum(const Waveform& w,
                                                         std::size_t nfft) {
  w.validate();
  if (w.empty()) throw std::invalid_argument("estimate_spectrum: empty waveform");
  if (nfft == 0) nfft = detail::next_pow2(w.samples.size());
  if (nfft < w.samples.size())
    throw std::invalid_argument("estimate_spectrum: nfft smaller than the waveform");

  const auto bins = detail::rfft(w.samples, nfft);
  const double df = w.sample_rate / static_cast<double>(nfft);
  std::vector<std::pair<double, double>> spectrum(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    // One-sided scaling keeps the bin sum equal to the time-domain energy.
    double power = std::norm(bins[k]) / static_cast<double>(nfft);
    const bool interior = k != 0 && !(nfft % 2 == 0 && k == nfft / 2);
    if (interior) power *= 2.0;
    spectrum[k] = {df * static_cast<double>(k), power};
  }
  return spectrum;
}

double power_fraction_below(const std::vector<std::pair<double, double>>& spectrum,
                            double frequency) {
  double below = 0.0, total = 0.0;
  for (const auto& [f, p] : spectrum) {
    total += p;
    if (f < frequency) below += p;
  }
  return total > 0.0 ? below / total : 0.0;
}

PlanReport plan(const MaterialSpec& material, const LinkBudget& budget) {
  PlanReport report;
  report.max_carrier_hz = max_carrier_frequency(material, budget);
  if (report.max_carrier_hz > 0.0) {
    report.skin_depth_at_max_m = skin_depth(material, report.max_carrier_hz);
    report.attenuation_at_max = attenuation_factor(material, report.max_carrier_hz);
  } else {
    report.skin_depth_at_max_m = std::numeric_limits<double>::infinity();
    report.attenuation_at_max = 1.0;
  }
  for (double f : {100.0, 200.0, 300.0, 500.0, 1000.0, 2000.0, 3000.0, 5000.0, 10000.0}) {
    report.attenuation_table.emplace_back(f, attenuation_factor(material, f));
  }
  return report;
}

}  // namespace tmc
