#include "tmc.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tmc/config.hpp"
#include "tmc/errors.hpp"
#include "tmc/harness.hpp"

struct tmc_config {
  tmc::SystemConfig cfg;
};
struct tmc_waveform {
  tmc::Waveform w;
};
struct tmc_capture {
  tmc::QuantizedCapture cap;
};
struct tmc_table {
  std::string header;  // comma-separated column names
  std::vector<std::string> columns;
  std::vector<std::vector<double>> cells;  // numeric view, NaN for text cells
  std::string csv;                         // full text including non-numeric cells
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return TMC_OK;
  } catch (const tmc::ConfigError& e) {
    return fail(TMC_ERR_CONFIG, e.what());
  } catch (const tmc::DecodeError& e) {
    return fail(TMC_ERR_DECODE, e.what());
  } catch (const tmc::FitError& e) {
    return fail(TMC_ERR_FIT, e.what());
  } catch (const std::domain_error& e) {
    return fail(TMC_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TMC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(TMC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(TMC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TMC_ERR_INTERNAL, "unknown error");
  }
}

int require(bool ok, const char* what) {
  return ok ? TMC_OK : fail(TMC_ERR_INVALID_ARGUMENT, what);
}

tmc::DemodConfig demod_config_from(const tmc::SystemConfig& sys, double capture_rate) {
  tmc::DemodConfig d;
  d.symbol_rate = sys.modem.symbol_rate;
  d.sample_rate = capture_rate;
  d.preamble = sys.modem.preamble;
  d.payload_len = sys.modem.payload_len;
  d.line_code = sys.demod.line_code;
  d.movavg_window_symbols = sys.demod.movavg_window_symbols;
  d.ones_fraction = sys.demod.ones_fraction;
  d.decision_threshold = sys.demod.decision_threshold;
  d.duty = sys.modem.duty;
  d.gap = sys.modem.gap;
  return d;
}

void fill_report(const tmc::BerReport& r, tmc_ber_report* out) {
  out->packets_found = r.packets_found;
  out->bits_compared = r.bits_compared;
  out->bit_errors = r.bit_errors;
  out->ber = r.ber;
  out->ber_defined = r.ber_defined ? 1 : 0;
}

tmc_table* make_results_table(const std::vector<tmc::ResultRow>& rows) {
  auto* t = new tmc_table;
  t->csv = tmc::results_to_csv(rows);
  t->header =
      "symbol_rate_hz,separation_m,supply_v,power_w,trials,packets_sent,"
      "packets_found,mean_ber,ber_stddev,inband_power_fraction,status";
  std::istringstream names(t->header);
  std::string name;
  while (std::getline(names, name, ',')) t->columns.push_back(name);
  for (const auto& r : rows) {
    t->cells.push_back({r.symbol_rate, r.separation_m, r.supply_volts, r.power_watts,
                        static_cast<double>(r.trials), static_cast<double>(r.packets_sent),
                        static_cast<double>(r.packets_found), r.mean_ber, r.ber_stddev,
                        r.inband_power_fraction,
                        r.status == "ok" ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace

extern "C" {

const char* tmc_version(void) { return TMC_VERSION_STRING; }

const char* tmc_status_name(int status) {
  switch (status) {
    case TMC_OK: return "ok";
    case TMC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TMC_ERR_CONFIG: return "configuration error";
    case TMC_ERR_IO: return "i/o error";
    case TMC_ERR_DECODE: return "decode error";
    case TMC_ERR_DOMAIN: return "domain error";
    case TMC_ERR_FIT: return "fit error";
    case TMC_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* tmc_last_error(void) { return g_last_error.c_str(); }

int tmc_config_create(tmc_config** out) {
  if (int rc = require(out != nullptr, "out is null")) return rc;
  return guarded([&] { *out = new tmc_config{tmc::default_config()}; });
}

int tmc_config_load(const char* path, tmc_config** out) {
  if (int rc = require(path && out, "path/out is null")) return rc;
  return guarded([&] { *out = new tmc_config{tmc::load_config(path)}; });
}

int tmc_config_set(tmc_config* cfg, const char* key, const char* value) {
  if (int rc = require(cfg && key && value, "cfg/key/value is null")) return rc;
  return guarded([&] { tmc::config_set(cfg->cfg, key, value); });
}

int tmc_config_get(const tmc_config* cfg, const char* key, char* buf, size_t buflen) {
  if (int rc = require(cfg && key && buf && buflen > 0, "cfg/key/buf is null")) return rc;
  return guarded([&] {
    const std::string value = tmc::config_get(cfg->cfg, key);
    std::snprintf(buf, buflen, "%s", value.c_str());
  });
}

int tmc_config_hash(const tmc_config* cfg, uint64_t* out) {
  if (int rc = require(cfg && out, "cfg/out is null")) return rc;
  return guarded([&] { *out = tmc::config_hash(cfg->cfg); });
}

void tmc_config_free(tmc_config* cfg) { delete cfg; }

int tmc_plan(const tmc_config* cfg, tmc_plan_report* out) {
  if (int rc = require(cfg && out, "cfg/out is null")) return rc;
  return guarded([&] {
    if (!cfg->cfg.material) throw tmc::ConfigError("plan: no [material] configured");
    const tmc::PlanReport report = tmc::plan(*cfg->cfg.material, cfg->cfg.link);
    out->max_carrier_hz = report.max_carrier_hz;
    out->skin_depth_at_max_m = report.skin_depth_at_max_m;
    out->attenuation_at_max = report.attenuation_at_max;
  });
}

int tmc_skin_depth(const tmc_config* cfg, double frequency_hz, double* out_m) {
  if (int rc = require(cfg && out_m, "cfg/out is null")) return rc;
  return guarded([&] {
    if (!cfg->cfg.material) throw tmc::ConfigError("skin_depth: no [material] configured");
    *out_m = tmc::skin_depth(*cfg->cfg.material, frequency_hz);
  });
}

int tmc_attenuation(const tmc_config* cfg, double frequency_hz, double* out) {
  if (int rc = require(cfg && out, "cfg/out is null")) return rc;
  return guarded([&] {
    if (!cfg->cfg.material) throw tmc::ConfigError("attenuation: no [material] configured");
    *out = tmc::attenuation_factor(*cfg->cfg.material, frequency_hz);
  });
}

int tmc_waveform_sample_rate(const tmc_waveform* w, double* out) {
  if (int rc = require(w && out, "w/out is null")) return rc;
  *out = w->w.sample_rate;
  return TMC_OK;
}

int tmc_waveform_size(const tmc_waveform* w, size_t* out) {
  if (int rc = require(w && out, "w/out is null")) return rc;
  *out = w->w.samples.size();
  return TMC_OK;
}

int tmc_waveform_data(const tmc_waveform* w, double* buf, size_t buflen, size_t* copied) {
  if (int rc = require(w && buf && copied, "w/buf/copied is null")) return rc;
  const size_t n = std::min(buflen, w->w.samples.size());
  std::memcpy(buf, w->w.samples.data(), n * sizeof(double));
  *copied = n;
  return TMC_OK;
}

int tmc_waveform_save_csv(const tmc_waveform* w, const char* path) {
  if (int rc = require(w && path, "w/path is null")) return rc;
  return guarded([&] { tmc::save_waveform_csv(w->w, path); });
}

int tmc_waveform_load_csv(const char* path, tmc_waveform** out) {
  if (int rc = require(path && out, "path/out is null")) return rc;
  return guarded([&] { *out = new tmc_waveform{tmc::load_waveform_csv(path)}; });
}

void tmc_waveform_free(tmc_waveform* w) { delete w; }

int tmc_modulate(const tmc_config* cfg, int packet_count, tmc_waveform** out) {
  if (int rc = require(cfg && out, "cfg/out is null")) return rc;
  if (int rc = require(packet_count >= 1, "packet_count must be >= 1")) return rc;
  return guarded([&] {
    const tmc::SystemConfig& sys = cfg->cfg;
    const tmc::Packet packet = tmc::frame_packet(sys.payload, sys.modem);
    const std::vector<tmc::Packet> train(static_cast<size_t>(packet_count), packet);
    const tmc::AmplifierSpec amp{sys.amplifier.supply_volts,
                                 sys.drive_current_for(sys.amplifier.supply_volts)};
    *out = new tmc_waveform{tmc::amplifier_output(tmc::modulate(train, sys.modem), amp)};
  });
}

int tmc_apply_channel(const tmc_config* cfg, const tmc_waveform* in, uint64_t seed,
                      tmc_waveform** out) {
  if (int rc = require(cfg && in && out, "cfg/in/out is null")) return rc;
  return guarded([&] {
    tmc::ChannelModel ch = cfg->cfg.effective_channel();
    ch.seed = seed;
    *out = new tmc_waveform{tmc::apply_channel(in->w, ch, cfg->cfg.geometry)};
  });
}

int tmc_rx_capture(const tmc_config* cfg, const tmc_waveform* in, uint64_t seed,
                   tmc_capture** out) {
  if (int rc = require(cfg && in && out, "cfg/in/out is null")) return rc;
  return guarded([&] {
    const tmc::SystemConfig& sys = cfg->cfg;
    tmc::Waveform lifted = tmc::amplify(in->w, sys.rx_amp);
    for (double& v : lifted.samples) v += sys.adc.v_ref / 2.0;
    tmc::QuantizedCapture cap = tmc::adc_sample(lifted, sys.adc);
    cap.offset_volts = sys.adc.v_ref / 2.0;
    cap = tmc::apply_sample_loss(cap, sys.adc, seed);
    *out = new tmc_capture{std::move(cap)};
  });
}

int tmc_capture_size(const tmc_capture* c, size_t* out) {
  if (int rc = require(c && out, "c/out is null")) return rc;
  *out = c->cap.codes.size();
  return TMC_OK;
}

int tmc_capture_save_csv(const tmc_capture* c, const char* path) {
  if (int rc = require(c && path, "c/path is null")) return rc;
  return guarded([&] { tmc::save_capture_csv(c->cap, path); });
}

int tmc_capture_load_csv(const char* path, tmc_capture** out) {
  if (int rc = require(path && out, "path/out is null")) return rc;
  return guarded([&] { *out = new tmc_capture{tmc::load_capture_csv(path)}; });
}

void tmc_capture_free(tmc_capture* c) { delete c; }

int tmc_demodulate(const tmc_config* cfg, const tmc_capture* capture, tmc_ber_report* out) {
  if (int rc = require(cfg && capture && out, "cfg/capture/out is null")) return rc;
  return guarded([&] {
    const tmc::DemodConfig d = demod_config_from(cfg->cfg, capture->cap.sample_rate);
    const std::vector<double> volts = capture->cap.to_volts();
    fill_report(tmc::demodulate_stream(volts, d, cfg->cfg.payload), out);
  });
}

int tmc_demodulate_file(const tmc_config* cfg, const char* path, tmc_ber_report* out) {
  if (int rc = require(cfg && path && out, "cfg/path/out is null")) return rc;
  return guarded([&] {
    std::ifstream probe(path);
    if (!probe) throw std::ios_base::failure(std::string("cannot open ") + path);
    std::string first;
    std::getline(probe, first);
    probe.close();
    std::vector<double> volts;
    double rate = 0.0;
    if (first.rfind("# sample_rate_hz=", 0) == 0) {
      // Look ahead for capture headers; a bare waveform only has the rate line.
      std::ifstream in(path);
      std::string line;
      bool is_capture = false;
      while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        if (line.rfind("# bits=", 0) == 0) is_capture = true;
      }
      if (is_capture) {
        const tmc::QuantizedCapture cap = tmc::load_capture_csv(path);
        volts = cap.to_volts();
        rate = cap.sample_rate;
      } else {
        const tmc::Waveform w = tmc::load_waveform_csv(path);
        volts = w.samples;
        rate = w.sample_rate;
      }
    } else {
      throw std::ios_base::failure(std::string(path) + ": not a waveform or capture CSV");
    }
    const tmc::DemodConfig d = demod_config_from(cfg->cfg, rate);
    fill_report(tmc::demodulate_stream(volts, d, cfg->cfg.payload), out);
  });
}

int tmc_run_experiment(const tmc_config* cfg, tmc_table** out) {
  if (int rc = require(cfg && out, "cfg/out is null")) return rc;
  return guarded([&] { *out = make_results_table(tmc::run_experiment(cfg->cfg)); });
}

int tmc_estimate_spectrum(const tmc_waveform* w, size_t nfft, tmc_table** out) {
  if (int rc = require(w && out, "w/out is null")) return rc;
  return guarded([&] {
    const auto spectrum = tmc::estimate_spectrum(w->w, nfft);
    auto* t = new tmc_table;
    t->header = "frequency_hz,power";
    t->columns = {"frequency_hz", "power"};
    t->csv = t->header + "\n";
    char buf[80];
    for (const auto& [f, p] : spectrum) {
      t->cells.push_back({f, p});
      std::snprintf(buf, sizeof(buf), "%.9g,%.12g\n", f, p);
      t->csv += buf;
    }
    *out = t;
  });
}

int tmc_table_rows(const tmc_table* t, size_t* out) {
  if (int rc = require(t && out, "t/out is null")) return rc;
  *out = t->cells.size();
  return TMC_OK;
}

int tmc_table_cols(const tmc_table* t, size_t* out) {
  if (int rc = require(t && out, "t/out is null")) return rc;
  *out = t->columns.size();
  return TMC_OK;
}

int tmc_table_cell(const tmc_table* t, size_t row, size_t col, double* out) {
  if (int rc = require(t && out, "t/out is null")) return rc;
  if (int rc = require(row < t->cells.size() && col < t->cells[row].size(),
                       "cell index out of range"))
    return rc;
  *out = t->cells[row][col];
  return TMC_OK;
}

int tmc_table_to_csv_file(const tmc_table* t, const char* path) {
  if (int rc = require(t && path, "t/path is null")) return rc;
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure(std::string("cannot open ") + path);
    out << t->csv;
    if (!out) throw std::ios_base::failure(std::string("write failed: ") + path);
  });
}

int tmc_table_to_csv(const tmc_table* t, char* buf, size_t buflen, size_t* needed) {
  if (int rc = require(t && needed, "t/needed is null")) return rc;
  *needed = t->csv.size() + 1;
  if (buf && buflen > 0) std::snprintf(buf, buflen, "%s", t->csv.c_str());
  return TMC_OK;
}

void tmc_table_free(tmc_table* t) { delete t; }

int tmc_calibrate(tmc_config* cfg, const char* points_csv, double input_vpp,
                  double* residual_out) {
  if (int rc = require(cfg && points_csv, "cfg/points_csv is null")) return rc;
  if (int rc = require(input_vpp > 0.0, "input_vpp must be > 0")) return rc;
  return guarded([&] {
    std::ifstream in(points_csv);
    if (!in) throw std::ios_base::failure(std::string("cannot open ") + points_csv);
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw std::ios_base::failure("calibration points: expected frequency_hz,vpp_volts");
      points.emplace_back(std::stod(line.substr(0, comma)),
                          std::stod(line.substr(comma + 1)) / input_vpp);
    }
    const tmc::CalibrationResult fit =
        tmc::calibrate(points, cfg->cfg.effective_channel());
    cfg->cfg.channel.coupling_gain_ref = fit.model.coupling_gain_ref;
    cfg->cfg.channel.pole_frequency = fit.model.pole_frequency;
    if (residual_out) *residual_out = fit.residual;
  });
}

}  // extern "C"
