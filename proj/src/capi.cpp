#include "pinkam/pinkam.h"

#include <cmath>
#include <cstring>
#include <ios>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/io.hpp"
#include "core/kuramoto.hpp"
#include "core/resonance.hpp"
#include "core/signal.hpp"
#include "core/spectral.hpp"
#include "core/sweep.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

pinkam_status fail(pinkam_status code, const std::string& msg) {
  set_error(msg);
  return code;
}

// Runs fn(), translating exceptions into status codes.
template <typename Fn>
pinkam_status guarded(Fn&& fn) {
  try {
    fn();
    return PINKAM_OK;
  } catch (const std::invalid_argument& e) {
    return fail(PINKAM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(PINKAM_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    return fail(msg.rfind("io:", 0) == 0 ? PINKAM_ERR_IO : PINKAM_ERR_RUNTIME, msg);
  } catch (const std::bad_alloc&) {
    return fail(PINKAM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(PINKAM_ERR_RUNTIME, e.what());
  }
}

pinkam_status require(bool ok, const char* what) {
  return ok ? PINKAM_OK : fail(PINKAM_ERR_INVALID_ARGUMENT, what);
}

pinkam::DemodMethod to_demod(const pinkam_demod& m) {
  pinkam::DemodMethod out;
  switch (m.kind) {
    case PINKAM_DEMOD_IDENTITY: out.kind = pinkam::DemodKind::identity; break;
    case PINKAM_DEMOD_SQUARE: out.kind = pinkam::DemodKind::square; break;
    case PINKAM_DEMOD_NTH_POWER: out.kind = pinkam::DemodKind::nth_power; break;
    case PINKAM_DEMOD_ABS: out.kind = pinkam::DemodKind::abs_value; break;
    case PINKAM_DEMOD_RECT_POS: out.kind = pinkam::DemodKind::rect_pos; break;
    case PINKAM_DEMOD_RECT_NEG: out.kind = pinkam::DemodKind::rect_neg; break;
    case PINKAM_DEMOD_THRESH_ABOVE_MEAN: out.kind = pinkam::DemodKind::thresh_above_mean; break;
    case PINKAM_DEMOD_ANTI_THRESH_BELOW_MEAN: out.kind = pinkam::DemodKind::anti_thresh_below_mean; break;
    case PINKAM_DEMOD_TIMING: out.kind = pinkam::DemodKind::timing; break;
    case PINKAM_DEMOD_BLOCK_ENERGY: out.kind = pinkam::DemodKind::block_energy; break;
    default: throw std::invalid_argument("capi: unknown demodulation kind");
  }
  out.power = m.power;
  out.block_len = m.block_len;
  out.literal_anti = m.literal_anti != 0;
  return out;
}

pinkam::EnsembleConfig to_config(const pinkam_sim_config& c) {
  pinkam::EnsembleConfig out;
  switch (c.model) {
    case PINKAM_MODEL_FIRST_ORDER: out.model = pinkam::Model::first_order; break;
    case PINKAM_MODEL_SECOND_ORDER: out.model = pinkam::Model::second_order; break;
    default: throw std::invalid_argument("capi: unknown model");
  }
  out.n = c.n;
  out.coupling = c.coupling;
  out.freq_center = c.freq_center_hz;
  out.freq_spread = c.freq_spread;
  if (c.explicit_freqs != nullptr && c.n > 0)
    out.explicit_freqs.assign(c.explicit_freqs, c.explicit_freqs + c.n);
  out.dt = c.dt_s;
  out.duration = c.duration_s;
  out.record_rate = c.record_rate_hz;
  out.seed = c.seed;
  out.reset.enabled = c.reset.enabled != 0;
  out.reset.max_interval = c.reset.max_interval_s;
  switch (c.reset.mode) {
    case 0: out.reset.mode = pinkam::ResetMode::shift; break;
    case 1: out.reset.mode = pinkam::ResetMode::reassign; break;
    default: throw std::invalid_argument("capi: unknown reset mode");
  }
  out.reset.amount_lo = c.reset.amount_lo;
  out.reset.amount_hi = c.reset.amount_hi;
  switch (c.reset.unit) {
    case 0: out.reset.unit = pinkam::AngleUnit::radians; break;
    case 1: out.reset.unit = pinkam::AngleUnit::turns; break;
    default: throw std::invalid_argument("capi: unknown reset unit");
  }
  return out;
}

pinkam::RoomGeometry to_room(const pinkam_room& r) {
  return pinkam::RoomGeometry{r.l1_m, r.l2_m, r.l3_m, r.sound_speed_mps};
}

}  // namespace

struct pinkam_series {
  pinkam::TimeSeries ts;
};

struct pinkam_spectrum {
  pinkam::Spectrum spec;
};

struct pinkam_trajectory {
  pinkam::Trajectory traj;
};

struct pinkam_modeset {
  pinkam::ModeSet modes;
};

struct pinkam_timeline {
  pinkam::SlopeTimeline tl;
};

struct pinkam_slopemap {
  pinkam::SlopeMap map;
};

extern "C" {

const char* pinkam_version(void) { return pinkam::kVersion; }

const char* pinkam_last_error(void) { return g_last_error.c_str(); }

/* ---- series ---- */

pinkam_status pinkam_series_create(const double* samples, size_t count, double rate_hz,
                                   double origin_s, pinkam_series** out) {
  if (auto st = require(samples != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    *out = new pinkam_series{pinkam::TimeSeries(std::vector<double>(samples, samples + count),
                                                rate_hz, origin_s)};
  });
}

void pinkam_series_free(pinkam_series* series) { delete series; }

size_t pinkam_series_size(const pinkam_series* series) { return series ? series->ts.size() : 0; }

double pinkam_series_rate(const pinkam_series* series) { return series ? series->ts.rate : 0.0; }

double pinkam_series_origin(const pinkam_series* series) { return series ? series->ts.origin : 0.0; }

const double* pinkam_series_data(const pinkam_series* series) {
  return series ? series->ts.samples.data() : nullptr;
}

pinkam_status pinkam_series_write_csv(const pinkam_series* series, const char* path) {
  if (auto st = require(series != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_series_csv(series->ts, path); });
}

pinkam_status pinkam_series_read_csv(const char* path, pinkam_series** out) {
  if (auto st = require(path != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] { *out = new pinkam_series{pinkam::read_series_csv(path)}; });
}

pinkam_status pinkam_series_read_wav(const char* path, int channel_policy, pinkam_series** out) {
  if (auto st = require(path != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (auto st = require(channel_policy >= 0 && channel_policy <= 2, "capi: bad channel policy"))
    return st;
  return guarded([&] {
    *out = new pinkam_series{
        pinkam::read_wav(path, static_cast<pinkam::ChannelPolicy>(channel_policy))};
  });
}

pinkam_status pinkam_series_write_wav(const pinkam_series* series, const char* path, int float32) {
  if (auto st = require(series != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    pinkam::write_wav(series->ts, path,
                      float32 ? pinkam::WavEncoding::float32 : pinkam::WavEncoding::pcm16);
  });
}

/* ---- synthesis ---- */

pinkam_status pinkam_synth_beat_pair(double lambda_hz, double omega_hz, double duration_s,
                                     double rate_hz, pinkam_series** out) {
  if (auto st = require(out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    *out = new pinkam_series{pinkam::synth_beat_pair(lambda_hz, omega_hz, duration_s, rate_hz)};
  });
}

pinkam_status pinkam_accum_frequencies(const pinkam_accum_spec* spec, double* out_freqs) {
  if (auto st = require(spec != nullptr && out_freqs != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    const pinkam::AccumulationSpec s{spec->base_freq_hz, spec->scale, spec->count, spec->xi_max,
                                     spec->seed};
    const auto freqs = pinkam::sample_exponential_frequencies(s);
    std::memcpy(out_freqs, freqs.data(), freqs.size() * sizeof(double));
  });
}

pinkam_status pinkam_synth_accumulated(const pinkam_accum_spec* spec, double duration_s,
                                       double rate_hz, pinkam_series** out) {
  if (auto st = require(spec != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    const pinkam::AccumulationSpec s{spec->base_freq_hz, spec->scale, spec->count, spec->xi_max,
                                     spec->seed};
    *out = new pinkam_series{pinkam::synth_accumulated(s, duration_s, rate_hz)};
  });
}

/* ---- demodulation ---- */

pinkam_status pinkam_demodulate(const pinkam_series* series, const pinkam_demod* method,
                                pinkam_series** out) {
  if (auto st = require(series != nullptr && method != nullptr && out != nullptr,
                        "capi: null pointer"))
    return st;
  return guarded([&] { *out = new pinkam_series{pinkam::demodulate(series->ts, to_demod(*method))}; });
}

pinkam_status pinkam_delayed_superposition(const pinkam_series* series, double tau_s,
                                           pinkam_series** out) {
  if (auto st = require(series != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] { *out = new pinkam_series{pinkam::delayed_superposition(series->ts, tau_s)}; });
}

/* ---- Kuramoto ---- */

pinkam_status pinkam_simulate(const pinkam_sim_config* config, pinkam_trajectory** out) {
  if (auto st = require(config != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] { *out = new pinkam_trajectory{pinkam::simulate(to_config(*config))}; });
}

void pinkam_trajectory_free(pinkam_trajectory* traj) { delete traj; }

size_t pinkam_trajectory_size(const pinkam_trajectory* traj) {
  return traj ? traj->traj.x.size() : 0;
}

double pinkam_trajectory_rate(const pinkam_trajectory* traj) { return traj ? traj->traj.x.rate : 0.0; }

const double* pinkam_trajectory_x(const pinkam_trajectory* traj) {
  return traj ? traj->traj.x.samples.data() : nullptr;
}

const double* pinkam_trajectory_r(const pinkam_trajectory* traj) {
  return traj ? traj->traj.r.samples.data() : nullptr;
}

const double* pinkam_trajectory_psi(const pinkam_trajectory* traj) {
  return traj ? traj->traj.psi.samples.data() : nullptr;
}

pinkam_status pinkam_trajectory_write_csv(const pinkam_trajectory* traj, const char* path,
                                          int include_psi) {
  if (auto st = require(traj != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_trajectory_csv(traj->traj, path, include_psi != 0); });
}

pinkam_status pinkam_simulate_observable(const pinkam_sim_config* config, int observable, int param,
                                         pinkam_series** out) {
  if (auto st = require(config != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (auto st = require(observable >= 0 && observable <= 3, "capi: unknown observable")) return st;
  return guarded([&] {
    *out = new pinkam_series{pinkam::simulate_observable(
        to_config(*config), static_cast<pinkam::ObservableKind>(observable), param)};
  });
}

/* ---- resonance ---- */

pinkam_status pinkam_room_preset(const char* name, pinkam_room* out) {
  if (auto st = require(name != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (std::strcmp(name, "musikverein") == 0) {
    const auto g = pinkam::RoomGeometry::musikverein();
    *out = pinkam_room{g.l1, g.l2, g.l3, g.sound_speed};
    return PINKAM_OK;
  }
  return fail(PINKAM_ERR_INVALID_ARGUMENT, std::string("capi: unknown room preset '") + name + "'");
}

pinkam_status pinkam_room_modes(const pinkam_room* room, int count, int index_start,
                                pinkam_modeset** out) {
  if (auto st = require(room != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    *out = new pinkam_modeset{pinkam::room_eigenfrequencies(to_room(*room), count, index_start)};
  });
}

void pinkam_modeset_free(pinkam_modeset* modes) { delete modes; }

size_t pinkam_modeset_size(const pinkam_modeset* modes) {
  return modes ? modes->modes.modes.size() : 0;
}

pinkam_status pinkam_modeset_get(const pinkam_modeset* modes, size_t index, int* n1, int* n2, int* n3,
                                 double* freq_hz) {
  if (auto st = require(modes != nullptr, "capi: null pointer")) return st;
  if (auto st = require(index < modes->modes.modes.size(), "capi: mode index out of range")) return st;
  const pinkam::Mode& m = modes->modes.modes[index];
  if (n1) *n1 = m.n1;
  if (n2) *n2 = m.n2;
  if (n3) *n3 = m.n3;
  if (freq_hz) *freq_hz = m.freq;
  return PINKAM_OK;
}

pinkam_status pinkam_modeset_write_csv(const pinkam_modeset* modes, const char* path) {
  if (auto st = require(modes != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_modes_csv(modes->modes, path); });
}

pinkam_status pinkam_synth_modes(const pinkam_modeset* modes, double duration_s, double rate_hz,
                                 pinkam_series** out) {
  if (auto st = require(modes != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    *out = new pinkam_series{pinkam::synth_modes(modes->modes, duration_s, rate_hz)};
  });
}

pinkam_status pinkam_add_reverberation(const pinkam_series* series, const pinkam_room* room,
                                       int reflections, double alpha, pinkam_series** out) {
  if (auto st = require(series != nullptr && room != nullptr && out != nullptr, "capi: null pointer"))
    return st;
  return guarded([&] {
    *out = new pinkam_series{
        pinkam::add_reverberation(series->ts, to_room(*room), pinkam::ReverbConfig{reflections, alpha})};
  });
}

double pinkam_lorentzian_gain(double f_hz, double f0_hz, double gamma_hz) {
  if (gamma_hz <= 0.0) return std::nan("");
  return pinkam::lorentzian_gain(f_hz, f0_hz, gamma_hz);
}

pinkam_status pinkam_apply_lorentzian(const pinkam_series* series, double f0_hz, double gamma_hz,
                                      pinkam_series** out) {
  if (auto st = require(series != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    *out = new pinkam_series{pinkam::apply_lorentzian(series->ts, f0_hz, gamma_hz)};
  });
}

/* ---- spectral ---- */

pinkam_status pinkam_psd(const pinkam_series* series, int estimator, int n_segments, int hann_taper,
                         pinkam_spectrum** out) {
  if (auto st = require(series != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (auto st = require(estimator == 0 || estimator == 1, "capi: unknown estimator")) return st;
  return guarded([&] {
    *out = new pinkam_spectrum{pinkam::psd(series->ts, static_cast<pinkam::Estimator>(estimator),
                                           n_segments,
                                           hann_taper ? pinkam::Taper::hann : pinkam::Taper::rect)};
  });
}

void pinkam_spectrum_free(pinkam_spectrum* spec) { delete spec; }

size_t pinkam_spectrum_size(const pinkam_spectrum* spec) { return spec ? spec->spec.freqs.size() : 0; }

const double* pinkam_spectrum_freqs(const pinkam_spectrum* spec) {
  return spec ? spec->spec.freqs.data() : nullptr;
}

const double* pinkam_spectrum_psd(const pinkam_spectrum* spec) {
  return spec ? spec->spec.psd.data() : nullptr;
}

pinkam_status pinkam_spectrum_write_csv(const pinkam_spectrum* spec, const char* path) {
  if (auto st = require(spec != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_spectrum_csv(spec->spec, path); });
}

pinkam_status pinkam_log_bin(const pinkam_spectrum* spec, int bins_per_decade, pinkam_spectrum** out) {
  if (auto st = require(spec != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] { *out = new pinkam_spectrum{pinkam::log_bin(spec->spec, bins_per_decade)}; });
}

pinkam_status pinkam_fit_power_law(const pinkam_spectrum* spec, double f_lo, double f_hi,
                                   pinkam_fit* out) {
  if (auto st = require(spec != nullptr && out != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    const pinkam::PowerLawFit fit = pinkam::fit_power_law(spec->spec, f_lo, f_hi);
    *out = pinkam_fit{fit.slope, fit.intercept, fit.f_lo, fit.f_hi, fit.r2, fit.n_bins};
  });
}

int pinkam_classify_slope(double slope) {
  if (!std::isfinite(slope)) {
    set_error("capi: classify needs a finite slope");
    return -1;
  }
  switch (pinkam::classify_slope(slope)) {
    case pinkam::NoiseClass::pink: return PINKAM_NOISE_PINK;
    case pinkam::NoiseClass::white: return PINKAM_NOISE_WHITE;
    case pinkam::NoiseClass::brown: return PINKAM_NOISE_BROWN;
    case pinkam::NoiseClass::other: return PINKAM_NOISE_OTHER;
  }
  return PINKAM_NOISE_OTHER;
}

const char* pinkam_noise_class_name(int noise_class) {
  switch (noise_class) {
    case PINKAM_NOISE_PINK: return "pink";
    case PINKAM_NOISE_WHITE: return "white";
    case PINKAM_NOISE_BROWN: return "brown";
    case PINKAM_NOISE_OTHER: return "other";
    default: return "invalid";
  }
}

pinkam_status pinkam_sliding_slopes(const pinkam_series* series, double window_s, double hop_s,
                                    const pinkam_demod* method, double f_lo, double f_hi,
                                    int bins_per_decade, pinkam_timeline** out) {
  if (auto st = require(series != nullptr && method != nullptr && out != nullptr,
                        "capi: null pointer"))
    return st;
  return guarded([&] {
    *out = new pinkam_timeline{pinkam::sliding_slopes(series->ts, window_s, hop_s, to_demod(*method),
                                                      f_lo, f_hi, bins_per_decade)};
  });
}

void pinkam_timeline_free(pinkam_timeline* timeline) { delete timeline; }

size_t pinkam_timeline_size(const pinkam_timeline* timeline) {
  return timeline ? timeline->tl.times.size() : 0;
}

const double* pinkam_timeline_times(const pinkam_timeline* timeline) {
  return timeline ? timeline->tl.times.data() : nullptr;
}

const double* pinkam_timeline_slopes(const pinkam_timeline* timeline) {
  return timeline ? timeline->tl.slopes.data() : nullptr;
}

pinkam_status pinkam_timeline_write_csv(const pinkam_timeline* timeline, const char* path) {
  if (auto st = require(timeline != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_timeline_csv(timeline->tl, path); });
}

/* ---- sweep ---- */

pinkam_status pinkam_run_sweep(const pinkam_sweep_spec* spec, pinkam_slopemap** out) {
  if (auto st = require(spec != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (auto st = require(spec->n_values != nullptr && spec->k_values != nullptr,
                        "capi: null value lists"))
    return st;
  return guarded([&] {
    pinkam::SweepSpec s;
    s.n_values.assign(spec->n_values, spec->n_values + spec->n_count);
    s.k_values.assign(spec->k_values, spec->k_values + spec->k_count);
    s.reps = spec->reps;
    s.base = to_config(spec->base);
    s.demod = to_demod(spec->demod);
    s.fit_lo = spec->fit_lo_hz;
    s.fit_hi = spec->fit_hi_hz;
    s.bins_per_decade = spec->bins_per_decade;
    s.master_seed = spec->master_seed;
    s.threads = spec->threads;
    *out = new pinkam_slopemap{pinkam::run_sweep(s)};
  });
}

void pinkam_slopemap_free(pinkam_slopemap* map) { delete map; }

size_t pinkam_slopemap_rows(const pinkam_slopemap* map) { return map ? map->map.n_count : 0; }

size_t pinkam_slopemap_cols(const pinkam_slopemap* map) { return map ? map->map.k_count : 0; }

pinkam_status pinkam_slopemap_cell(const pinkam_slopemap* map, size_t row, size_t col,
                                   pinkam_sweep_cell* out) {
  if (auto st = require(map != nullptr && out != nullptr, "capi: null pointer")) return st;
  if (auto st = require(row < map->map.n_count && col < map->map.k_count,
                        "capi: cell index out of range"))
    return st;
  const pinkam::SweepCell& c = map->map.at(row, col);
  out->n = c.n;
  out->coupling = c.coupling;
  out->ok = c.ok ? 1 : 0;
  out->slope_mean = c.slope_mean;
  out->slope_std = c.slope_std;
  out->label = static_cast<int>(c.label);
  return PINKAM_OK;
}

const char* pinkam_slopemap_cell_error(const pinkam_slopemap* map, size_t row, size_t col) {
  if (!map || row >= map->map.n_count || col >= map->map.k_count) return "";
  return map->map.at(row, col).error.c_str();
}

pinkam_status pinkam_slopemap_write_csv(const pinkam_slopemap* map, const char* path) {
  if (auto st = require(map != nullptr && path != nullptr, "capi: null pointer")) return st;
  return guarded([&] { pinkam::write_slopemap_csv(map->map, path); });
}

pinkam_status pinkam_summarize_regions(const pinkam_slopemap* map, double band,
                                       pinkam_region_stats* diagonal, pinkam_region_stats* resonance,
                                       pinkam_region_stats* synchronization) {
  if (auto st = require(map != nullptr, "capi: null pointer")) return st;
  return guarded([&] {
    const pinkam::RegionSummary sum = pinkam::summarize_regions(map->map, band);
    auto fill = [](pinkam_region_stats* dst, const pinkam::RegionStats& src) {
      if (dst) *dst = pinkam_region_stats{src.mean_slope, src.std_slope, src.pink_fraction, src.cells};
    };
    fill(diagonal, sum.diagonal);
    fill(resonance, sum.resonance);
    fill(synchronization, sum.synchronization);
  });
}

} /* extern "C" */
