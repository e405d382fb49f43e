// Command-line front end. Links the shared C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmc.h"

namespace {

struct ConfigHandle {
  tmc_config* cfg = nullptr;
  ~ConfigHandle() { tmc_config_free(cfg); }
};

int die(const char* what, int rc) {
  std::fprintf(stderr, "tmc: %s: %s (%s)\n", what, tmc_last_error(), tmc_status_name(rc));
  return 1;
}

int load_config(const std::string& path, const std::vector<std::string>& overrides,
                ConfigHandle& out) {
  int rc = path.empty() ? tmc_config_create(&out.cfg) : tmc_config_load(path.c_str(), &out.cfg);
  if (rc != TMC_OK) return die("config", rc);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "tmc: --set expects section.key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    rc = tmc_config_set(out.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (rc != TMC_OK) return die("--set", rc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"through-metal magnetic-induction link simulator"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool show_version = false;
  app.add_option("--config", config_path, "configuration file (flat INI)");
  app.add_option("--out", out_path, "output file for CSV-producing commands");
  app.add_option("--set", overrides, "override a config key, section.key=value")
      ->take_all();
  app.add_flag("--version", show_version, "print version and preset hash");
  auto* seed_opt = app.add_option("--seed", seed, "override channel/experiment seeds");

  auto* cmd_plan = app.add_subcommand("plan", "frequency plan from the link budget");

  auto* cmd_mod = app.add_subcommand("modulate", "synthesize a framed packet train");
  int packets = 10;
  cmd_mod->add_option("--packets", packets, "number of packets")->check(CLI::PositiveNumber);

  auto* cmd_chan = app.add_subcommand("channel", "apply the channel to a waveform CSV");
  std::string in_path;
  bool emit_capture = false;
  cmd_chan->add_option("--in", in_path, "input waveform CSV")->required();
  cmd_chan->add_flag("--capture", emit_capture,
                     "also run the receive front end and emit a capture CSV");

  auto* cmd_demod = app.add_subcommand("demod", "demodulate a capture or waveform CSV");
  std::string demod_in;
  cmd_demod->add_option("--in", demod_in, "input capture/waveform CSV")->required();

  auto* cmd_sweep = app.add_subcommand("sweep", "run the configured experiment sweep");

  auto* cmd_spec = app.add_subcommand("spectrum", "periodogram of a waveform CSV");
  std::string spec_in;
  std::size_t nfft = 0;
  cmd_spec->add_option("--in", spec_in, "input waveform CSV")->required();
  cmd_spec->add_option("--nfft", nfft, "FFT length (0 = next power of two)");

  auto* cmd_cal = app.add_subcommand("calibrate", "fit channel gain/pole to measured points");
  std::string points_path;
  double input_vpp = 10.0;
  cmd_cal->add_option("--points", points_path, "two-column CSV: frequency_hz,vpp_volts")
      ->required();
  cmd_cal->add_option("--input-vpp", input_vpp, "transmit peak-to-peak drive, volts");

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  ConfigHandle cfg;
  if (int rc = load_config(config_path, overrides, cfg)) return rc;
  if (seed_given) {
    const std::string s = std::to_string(seed);
    if (tmc_config_set(cfg.cfg, "channel.seed", s.c_str()) != TMC_OK ||
        tmc_config_set(cfg.cfg, "experiment.seed", s.c_str()) != TMC_OK)
      return die("--seed", TMC_ERR_CONFIG);
  }

  if (show_version) {
    std::uint64_t hash = 0;
    tmc_config_hash(cfg.cfg, &hash);
    std::printf("tmc %s\n", tmc_version());
    std::printf("%s: %016" PRIx64 "\n",
                config_path.empty() ? "default config" : config_path.c_str(), hash);
    if (app.get_subcommands().empty()) return 0;
  }

  if (cmd_plan->parsed()) {
    tmc_plan_report report{};
    if (int rc = tmc_plan(cfg.cfg, &report); rc != TMC_OK) return die("plan", rc);
    std::printf("max carrier frequency: %.4g Hz (%.2g kHz)\n", report.max_carrier_hz,
                report.max_carrier_hz / 1e3);
    std::printf("skin depth at max:     %.4g mm\n", report.skin_depth_at_max_m * 1e3);
    std::printf("attenuation at max:    %.4g\n", report.attenuation_at_max);
    std::printf("\n%12s  %14s  %12s\n", "freq_hz", "skin_depth_mm", "attenuation");
    for (double f : {100.0, 200.0, 300.0, 500.0, 1000.0, 2000.0, 3000.0, 5000.0, 10000.0}) {
      double depth = 0.0, atten = 0.0;
      if (tmc_skin_depth(cfg.cfg, f, &depth) != TMC_OK ||
          tmc_attenuation(cfg.cfg, f, &atten) != TMC_OK)
        return die("plan table", TMC_ERR_DOMAIN);
      std::printf("%12.0f  %14.4g  %12.4g\n", f, depth * 1e3, atten);
    }
    return 0;
  }

  if (cmd_mod->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "tmc: modulate requires --out\n");
      return 1;
    }
    tmc_waveform* w = nullptr;
    if (int rc = tmc_modulate(cfg.cfg, packets, &w); rc != TMC_OK) return die("modulate", rc);
    const int rc = tmc_waveform_save_csv(w, out_path.c_str());
    std::size_t n = 0;
    tmc_waveform_size(w, &n);
    tmc_waveform_free(w);
    if (rc != TMC_OK) return die("write", rc);
    std::printf("wrote %zu samples to %s\n", n, out_path.c_str());
    return 0;
  }

  if (cmd_chan->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "tmc: channel requires --out\n");
      return 1;
    }
    tmc_waveform* in = nullptr;
    if (int rc = tmc_waveform_load_csv(in_path.c_str(), &in); rc != TMC_OK)
      return die("load", rc);
    tmc_waveform* received = nullptr;
    int rc = tmc_apply_channel(cfg.cfg, in, seed, &received);
    tmc_waveform_free(in);
    if (rc != TMC_OK) return die("channel", rc);
    if (emit_capture) {
      tmc_capture* cap = nullptr;
      rc = tmc_rx_capture(cfg.cfg, received, seed + 1, &cap);
      tmc_waveform_free(received);
      if (rc != TMC_OK) return die("rx", rc);
      rc = tmc_capture_save_csv(cap, out_path.c_str());
      std::size_t n = 0;
      tmc_capture_size(cap, &n);
      tmc_capture_free(cap);
      if (rc != TMC_OK) return die("write", rc);
      std::printf("wrote %zu codes to %s\n", n, out_path.c_str());
    } else {
      rc = tmc_waveform_save_csv(received, out_path.c_str());
      std::size_t n = 0;
      tmc_waveform_size(received, &n);
      tmc_waveform_free(received);
      if (rc != TMC_OK) return die("write", rc);
      std::printf("wrote %zu samples to %s\n", n, out_path.c_str());
    }
    return 0;
  }

  if (cmd_demod->parsed()) {
    tmc_ber_report report{};
    if (int rc = tmc_demodulate_file(cfg.cfg, demod_in.c_str(), &report); rc != TMC_OK)
      return die("demod", rc);
    std::printf("packets_found,bits_compared,bit_errors,ber\n");
    std::printf("%lld,%lld,%lld,%.9g\n", report.packets_found, report.bits_compared,
                report.bit_errors, report.ber);
    if (!report.ber_defined) {
      std::fprintf(stderr, "tmc: no packets decoded; BER undefined\n");
      return 2;
    }
    std::fprintf(stderr, "decoded %lld packets, %lld/%lld bits in error (BER %.4g)\n",
                 report.packets_found, report.bit_errors, report.bits_compared, report.ber);
    return 0;
  }

  if (cmd_sweep->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "tmc: sweep requires --out\n");
      return 1;
    }
    tmc_table* table = nullptr;
    if (int rc = tmc_run_experiment(cfg.cfg, &table); rc != TMC_OK) return die("sweep", rc);
    const int rc = tmc_table_to_csv_file(table, out_path.c_str());
    std::size_t rows = 0;
    tmc_table_rows(table, &rows);
    tmc_table_free(table);
    if (rc != TMC_OK) return die("write", rc);
    std::printf("wrote %zu sweep rows to %s\n", rows, out_path.c_str());
    return 0;
  }

  if (cmd_spec->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "tmc: spectrum requires --out\n");
      return 1;
    }
    tmc_waveform* w = nullptr;
    if (int rc = tmc_waveform_load_csv(spec_in.c_str(), &w); rc != TMC_OK)
      return die("load", rc);
    tmc_table* table = nullptr;
    int rc = tmc_estimate_spectrum(w, nfft, &table);
    tmc_waveform_free(w);
    if (rc != TMC_OK) return die("spectrum", rc);
    rc = tmc_table_to_csv_file(table, out_path.c_str());
    std::size_t rows = 0;
    tmc_table_rows(table, &rows);
    tmc_table_free(table);
    if (rc != TMC_OK) return die("write", rc);
    std::printf("wrote %zu spectrum bins to %s\n", rows, out_path.c_str());
    return 0;
  }

  if (cmd_cal->parsed()) {
    double residual = 0.0;
    if (int rc = tmc_calibrate(cfg.cfg, points_path.c_str(), input_vpp, &residual);
        rc != TMC_OK)
      return die("calibrate", rc);
    char gain[64], pole[64];
    tmc_config_get(cfg.cfg, "channel.coupling_gain_ref", gain, sizeof(gain));
    tmc_config_get(cfg.cfg, "channel.pole_frequency_hz", pole, sizeof(pole));
    std::printf("channel.coupling_gain_ref = %s\n", gain);
    std::printf("channel.pole_frequency_hz = %s\n", pole);
    std::printf("# rms residual: %.6g\n", residual);
    return 0;
  }

  if (!show_version) std::fputs(app.help().c_str(), stdout);
  return 0;
}
