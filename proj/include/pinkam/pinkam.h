/* pinkam - synthesis and spectral-slope analysis of amplitude-modulated
 * 1/f fluctuations: beat/accumulation synthesis, stochastic Kuramoto
 * ensembles, room-resonance superposition, demodulation transforms, PSD
 * power-law fitting and (N, K) slope maps.
 *
 * C API: opaque handles, status-code returns, per-thread error messages.
 * Every function returning pinkam_status sets the out-parameter only on
 * PINKAM_OK; on failure pinkam_last_error() describes what went wrong.
 */
#ifndef PINKAM_H
#define PINKAM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PINKAM_API __declspec(dllexport)
#else
#define PINKAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pinkam_status {
  PINKAM_OK = 0,
  PINKAM_ERR_INVALID_ARGUMENT = 1,
  PINKAM_ERR_IO = 2,
  PINKAM_ERR_RUNTIME = 3,
} pinkam_status;

PINKAM_API const char* pinkam_version(void);

/* Message for the most recent failure on the calling thread. */
PINKAM_API const char* pinkam_last_error(void);

/* ---- time series ------------------------------------------------------- */

typedef struct pinkam_series pinkam_series;

PINKAM_API pinkam_status pinkam_series_create(const double* samples, size_t count, double rate_hz,
                                              double origin_s, pinkam_series** out);
PINKAM_API void pinkam_series_free(pinkam_series* series);
PINKAM_API size_t pinkam_series_size(const pinkam_series* series);
PINKAM_API double pinkam_series_rate(const pinkam_series* series);
PINKAM_API double pinkam_series_origin(const pinkam_series* series);
PINKAM_API const double* pinkam_series_data(const pinkam_series* series);

PINKAM_API pinkam_status pinkam_series_write_csv(const pinkam_series* series, const char* path);
PINKAM_API pinkam_status pinkam_series_read_csv(const char* path, pinkam_series** out);

typedef enum pinkam_channel_policy {
  PINKAM_CHANNEL_MIX_MEAN = 0,
  PINKAM_CHANNEL_LEFT = 1,
  PINKAM_CHANNEL_RIGHT = 2,
} pinkam_channel_policy;

/* 16/24-bit PCM and 32-bit float WAV, mono or stereo; amplitudes in [-1,1]. */
PINKAM_API pinkam_status pinkam_series_read_wav(const char* path, int channel_policy,
                                                pinkam_series** out);
PINKAM_API pinkam_status pinkam_series_write_wav(const pinkam_series* series, const char* path,
                                                 int float32);

/* ---- synthesis --------------------------------------------------------- */

PINKAM_API pinkam_status pinkam_synth_beat_pair(double lambda_hz, double omega_hz, double duration_s,
                                                double rate_hz, pinkam_series** out);

typedef struct pinkam_accum_spec {
  double base_freq_hz;
  double scale;
  int count;
  double xi_max;
  uint64_t seed;
} pinkam_accum_spec;

/* Writes the spec's `count` component frequencies into out_freqs. */
PINKAM_API pinkam_status pinkam_accum_frequencies(const pinkam_accum_spec* spec, double* out_freqs);
PINKAM_API pinkam_status pinkam_synth_accumulated(const pinkam_accum_spec* spec, double duration_s,
                                                  double rate_hz, pinkam_series** out);

/* ---- demodulation ------------------------------------------------------ */

typedef enum pinkam_demod_kind {
  PINKAM_DEMOD_IDENTITY = 0,
  PINKAM_DEMOD_SQUARE = 1,
  PINKAM_DEMOD_NTH_POWER = 2,
  PINKAM_DEMOD_ABS = 3,
  PINKAM_DEMOD_RECT_POS = 4,
  PINKAM_DEMOD_RECT_NEG = 5,
  PINKAM_DEMOD_THRESH_ABOVE_MEAN = 6,
  PINKAM_DEMOD_ANTI_THRESH_BELOW_MEAN = 7,
  PINKAM_DEMOD_TIMING = 8,
  PINKAM_DEMOD_BLOCK_ENERGY = 9,
} pinkam_demod_kind;

typedef struct pinkam_demod {
  int kind;       /* pinkam_demod_kind */
  int power;      /* nth_power only, >= 1 */
  int block_len;  /* block_energy only, >= 1 */
  int literal_anti; /* nonzero: anti-thresholding keeps every sample below mean */
} pinkam_demod;

PINKAM_API pinkam_status pinkam_demodulate(const pinkam_series* series, const pinkam_demod* method,
                                           pinkam_series** out);
PINKAM_API pinkam_status pinkam_delayed_superposition(const pinkam_series* series, double tau_s,
                                                      pinkam_series** out);

/* ---- stochastic Kuramoto ensembles ------------------------------------- */

typedef enum pinkam_model {
  PINKAM_MODEL_FIRST_ORDER = 0,
  PINKAM_MODEL_SECOND_ORDER = 1,
} pinkam_model;

typedef struct pinkam_reset_policy {
  int enabled;
  double max_interval_s;
  int mode;          /* 0 shift, 1 reassign */
  double amount_lo;
  double amount_hi;
  int unit;          /* 0 radians, 1 turns */
} pinkam_reset_policy;

typedef struct pinkam_sim_config {
  int model; /* pinkam_model */
  int n;
  double coupling;
  double freq_center_hz;
  double freq_spread;
  const double* explicit_freqs; /* NULL, or n natural frequencies in Hz */
  double dt_s;
  double duration_s;
  double record_rate_hz;
  uint64_t seed;
  pinkam_reset_policy reset;
} pinkam_sim_config;

typedef struct pinkam_trajectory pinkam_trajectory;

PINKAM_API pinkam_status pinkam_simulate(const pinkam_sim_config* config, pinkam_trajectory** out);
PINKAM_API void pinkam_trajectory_free(pinkam_trajectory* traj);
PINKAM_API size_t pinkam_trajectory_size(const pinkam_trajectory* traj);
PINKAM_API double pinkam_trajectory_rate(const pinkam_trajectory* traj);
PINKAM_API const double* pinkam_trajectory_x(const pinkam_trajectory* traj);
PINKAM_API const double* pinkam_trajectory_r(const pinkam_trajectory* traj);
PINKAM_API const double* pinkam_trajectory_psi(const pinkam_trajectory* traj);
PINKAM_API pinkam_status pinkam_trajectory_write_csv(const pinkam_trajectory* traj, const char* path,
                                                     int include_psi);

typedef enum pinkam_observable {
  PINKAM_OBSERVABLE_MEAN_FIELD = 0,
  PINKAM_OBSERVABLE_SINGLE = 1,      /* sin(theta_param) */
  PINKAM_OBSERVABLE_PARTIAL_SUM = 2, /* mean of sin(theta_i), i < param */
  PINKAM_OBSERVABLE_PHASE_SUM = 3,   /* mean of wrapped phases */
} pinkam_observable;

PINKAM_API pinkam_status pinkam_simulate_observable(const pinkam_sim_config* config, int observable,
                                                    int param, pinkam_series** out);

/* ---- room resonance ----------------------------------------------------- */

typedef struct pinkam_room {
  double l1_m;
  double l2_m;
  double l3_m;
  double sound_speed_mps;
} pinkam_room;

/* Known presets: "musikverein". */
PINKAM_API pinkam_status pinkam_room_preset(const char* name, pinkam_room* out);

typedef struct pinkam_modeset pinkam_modeset;

PINKAM_API pinkam_status pinkam_room_modes(const pinkam_room* room, int count, int index_start,
                                           pinkam_modeset** out);
PINKAM_API void pinkam_modeset_free(pinkam_modeset* modes);
PINKAM_API size_t pinkam_modeset_size(const pinkam_modeset* modes);
PINKAM_API pinkam_status pinkam_modeset_get(const pinkam_modeset* modes, size_t index, int* n1, int* n2,
                                            int* n3, double* freq_hz);
PINKAM_API pinkam_status pinkam_modeset_write_csv(const pinkam_modeset* modes, const char* path);

PINKAM_API pinkam_status pinkam_synth_modes(const pinkam_modeset* modes, double duration_s,
                                            double rate_hz, pinkam_series** out);
PINKAM_API pinkam_status pinkam_add_reverberation(const pinkam_series* series, const pinkam_room* room,
                                                  int reflections, double alpha, pinkam_series** out);

PINKAM_API double pinkam_lorentzian_gain(double f_hz, double f0_hz, double gamma_hz);
PINKAM_API pinkam_status pinkam_apply_lorentzian(const pinkam_series* series, double f0_hz,
                                                 double gamma_hz, pinkam_series** out);

/* ---- spectral analysis -------------------------------------------------- */

typedef enum pinkam_estimator {
  PINKAM_ESTIMATOR_PERIODOGRAM = 0,
  PINKAM_ESTIMATOR_SEGMENT_AVERAGE = 1,
} pinkam_estimator;

typedef struct pinkam_spectrum pinkam_spectrum;

PINKAM_API pinkam_status pinkam_psd(const pinkam_series* series, int estimator, int n_segments,
                                    int hann_taper, pinkam_spectrum** out);
PINKAM_API void pinkam_spectrum_free(pinkam_spectrum* spec);
PINKAM_API size_t pinkam_spectrum_size(const pinkam_spectrum* spec);
PINKAM_API const double* pinkam_spectrum_freqs(const pinkam_spectrum* spec);
PINKAM_API const double* pinkam_spectrum_psd(const pinkam_spectrum* spec);
PINKAM_API pinkam_status pinkam_spectrum_write_csv(const pinkam_spectrum* spec, const char* path);

PINKAM_API pinkam_status pinkam_log_bin(const pinkam_spectrum* spec, int bins_per_decade,
                                        pinkam_spectrum** out);

typedef struct pinkam_fit {
  double slope;
  double intercept; /* log10 psd at 1 Hz */
  double f_lo;
  double f_hi;
  double r2;
  int n_bins;
} pinkam_fit;

PINKAM_API pinkam_status pinkam_fit_power_law(const pinkam_spectrum* spec, double f_lo, double f_hi,
                                              pinkam_fit* out);

typedef enum pinkam_noise_class {
  PINKAM_NOISE_PINK = 0,
  PINKAM_NOISE_WHITE = 1,
  PINKAM_NOISE_BROWN = 2,
  PINKAM_NOISE_OTHER = 3,
} pinkam_noise_class;

/* Returns a pinkam_noise_class, or -1 for a non-finite slope. */
PINKAM_API int pinkam_classify_slope(double slope);
PINKAM_API const char* pinkam_noise_class_name(int noise_class);

typedef struct pinkam_timeline pinkam_timeline;

PINKAM_API pinkam_status pinkam_sliding_slopes(const pinkam_series* series, double window_s,
                                               double hop_s, const pinkam_demod* method, double f_lo,
                                               double f_hi, int bins_per_decade, pinkam_timeline** out);
PINKAM_API void pinkam_timeline_free(pinkam_timeline* timeline);
PINKAM_API size_t pinkam_timeline_size(const pinkam_timeline* timeline);
PINKAM_API const double* pinkam_timeline_times(const pinkam_timeline* timeline);
PINKAM_API const double* pinkam_timeline_slopes(const pinkam_timeline* timeline);
PINKAM_API pinkam_status pinkam_timeline_write_csv(const pinkam_timeline* timeline, const char* path);

/* ---- (N, K) sweeps ------------------------------------------------------ */

typedef struct pinkam_sweep_spec {
  const int* n_values;
  size_t n_count;
  const double* k_values;
  size_t k_count;
  int reps;
  pinkam_sim_config base; /* n, coupling and seed overridden per cell */
  pinkam_demod demod;
  double fit_lo_hz;
  double fit_hi_hz;
  int bins_per_decade;
  uint64_t master_seed;
  int threads; /* 0 = hardware concurrency */
} pinkam_sweep_spec;

typedef struct pinkam_slopemap pinkam_slopemap;

typedef struct pinkam_sweep_cell {
  int n;
  double coupling;
  int ok;
  double slope_mean;
  double slope_std;
  int label; /* pinkam_noise_class, valid when ok */
} pinkam_sweep_cell;

PINKAM_API pinkam_status pinkam_run_sweep(const pinkam_sweep_spec* spec, pinkam_slopemap** out);
PINKAM_API void pinkam_slopemap_free(pinkam_slopemap* map);
PINKAM_API size_t pinkam_slopemap_rows(const pinkam_slopemap* map); /* distinct N values */
PINKAM_API size_t pinkam_slopemap_cols(const pinkam_slopemap* map); /* distinct K values */
PINKAM_API pinkam_status pinkam_slopemap_cell(const pinkam_slopemap* map, size_t row, size_t col,
                                              pinkam_sweep_cell* out);
PINKAM_API const char* pinkam_slopemap_cell_error(const pinkam_slopemap* map, size_t row, size_t col);
PINKAM_API pinkam_status pinkam_slopemap_write_csv(const pinkam_slopemap* map, const char* path);

typedef struct pinkam_region_stats {
  double mean_slope;
  double std_slope;
  double pink_fraction;
  size_t cells;
} pinkam_region_stats;

/* Region summary with |N-K| <= band as the near-diagonal region. */
PINKAM_API pinkam_status pinkam_summarize_regions(const pinkam_slopemap* map, double band,
                                                  pinkam_region_stats* diagonal,
                                                  pinkam_region_stats* resonance,
                                                  pinkam_region_stats* synchronization);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PINKAM_H */
