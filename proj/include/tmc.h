/*
 * tmc - through-metal magnetic-induction link simulator, C API.
 *
 * All functions return TMC_OK (0) on success or a negative tmc_status code.
 * tmc_last_error() describes the most recent failure on the calling thread.
 * Handles are opaque; every *_create/load function has a matching *_free.
 */
#ifndef TMC_H
#define TMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TMC_VERSION_STRING "1.0.0"

typedef enum tmc_status {
  TMC_OK = 0,
  TMC_ERR_INVALID_ARGUMENT = -1,
  TMC_ERR_CONFIG = -2,
  TMC_ERR_IO = -3,
  TMC_ERR_DECODE = -4,
  TMC_ERR_DOMAIN = -5,
  TMC_ERR_FIT = -6,
  TMC_ERR_INTERNAL = -7
} tmc_status;

typedef struct tmc_config tmc_config;     /* full link + sweep configuration */
typedef struct tmc_waveform tmc_waveform; /* sampled voltage sequence */
typedef struct tmc_capture tmc_capture;   /* quantized ADC capture */
typedef struct tmc_table tmc_table;       /* generic result table (CSV-able) */

const char* tmc_version(void);
const char* tmc_status_name(int status);
/* Thread-local message for the last failing call. */
const char* tmc_last_error(void);

/* ---- configuration ---- */
int tmc_config_create(tmc_config** out);
int tmc_config_load(const char* path, tmc_config** out);
/* key is "section.key" using the config-file schema. */
int tmc_config_set(tmc_config* cfg, const char* key, const char* value);
int tmc_config_get(const tmc_config* cfg, const char* key, char* buf, size_t buflen);
int tmc_config_hash(const tmc_config* cfg, uint64_t* out);
void tmc_config_free(tmc_config* cfg);

/* ---- frequency planning ---- */
typedef struct tmc_plan_report {
  double max_carrier_hz;
  double skin_depth_at_max_m;
  double attenuation_at_max;
} tmc_plan_report;

int tmc_plan(const tmc_config* cfg, tmc_plan_report* out);
int tmc_skin_depth(const tmc_config* cfg, double frequency_hz, double* out_m);
int tmc_attenuation(const tmc_config* cfg, double frequency_hz, double* out);

/* ---- waveforms ---- */
int tmc_waveform_sample_rate(const tmc_waveform* w, double* out);
int tmc_waveform_size(const tmc_waveform* w, size_t* out);
/* Copies min(buflen, size) samples into buf; returns the copied count in *copied. */
int tmc_waveform_data(const tmc_waveform* w, double* buf, size_t buflen, size_t* copied);
int tmc_waveform_save_csv(const tmc_waveform* w, const char* path);
int tmc_waveform_load_csv(const char* path, tmc_waveform** out);
void tmc_waveform_free(tmc_waveform* w);

/* ---- signal chain ---- */
/* Framed packet train at the configured amplifier rail. packet_count >= 1. */
int tmc_modulate(const tmc_config* cfg, int packet_count, tmc_waveform** out);
/* Channel response plus seeded noise at the configured geometry. */
int tmc_apply_channel(const tmc_config* cfg, const tmc_waveform* in, uint64_t seed,
                      tmc_waveform** out);
/* Receive amplifier + ADC + buffer-flush sample loss. */
int tmc_rx_capture(const tmc_config* cfg, const tmc_waveform* in, uint64_t seed,
                   tmc_capture** out);

int tmc_capture_size(const tmc_capture* c, size_t* out);
int tmc_capture_save_csv(const tmc_capture* c, const char* path);
int tmc_capture_load_csv(const char* path, tmc_capture** out);
void tmc_capture_free(tmc_capture* c);

/* ---- demodulation ---- */
typedef struct tmc_ber_report {
  long long packets_found;
  long long bits_compared;
  long long bit_errors;
  double ber;
  int ber_defined; /* 0 when no packets were decoded */
} tmc_ber_report;

int tmc_demodulate(const tmc_config* cfg, const tmc_capture* capture, tmc_ber_report* out);
/* Accepts either a capture CSV or a waveform CSV (detected by header). */
int tmc_demodulate_file(const tmc_config* cfg, const char* path, tmc_ber_report* out);

/* ---- experiments ---- */
int tmc_run_experiment(const tmc_config* cfg, tmc_table** out);
int tmc_estimate_spectrum(const tmc_waveform* w, size_t nfft, tmc_table** out);

int tmc_table_rows(const tmc_table* t, size_t* out);
int tmc_table_cols(const tmc_table* t, size_t* out);
int tmc_table_cell(const tmc_table* t, size_t row, size_t col, double* out);
int tmc_table_to_csv_file(const tmc_table* t, const char* path);
/* Copies the CSV text (NUL-terminated, truncated to buflen); *needed gets the
 * full length including the terminator. */
int tmc_table_to_csv(const tmc_table* t, char* buf, size_t buflen, size_t* needed);
void tmc_table_free(tmc_table* t);

/* ---- calibration ---- */
/* Fits channel.coupling_gain_ref and channel.pole_frequency_hz to a
 * two-column CSV (frequency_hz, vpp_volts) measured with input_vpp drive,
 * updating cfg in place. residual_out may be NULL. */
int tmc_calibrate(tmc_config* cfg, const char* points_csv, double input_vpp,
                  double* residual_out);

#ifdef __cplusplus
}
#endif

#endif /* TMC_H */
