// pinkam command-line front end: synthesis, SKM simulation, spectral-slope
// analysis, sliding-window slope timelines and (N, K) sweeps, with a
// reproducibility manifest written next to every output.
//
// Exit codes: 0 success, 1 usage error, 2 runtime/data error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <pinkam/pinkam.h>

#include "manifest.hpp"
#include "svg.hpp"

using nlohmann::json;

namespace {

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{1, msg}; }
[[noreturn]] void data_error(const std::string& msg) { throw CliError{2, msg}; }

void check(pinkam_status st) {
  if (st == PINKAM_OK) return;
  const std::string msg = pinkam_last_error();
  if (st == PINKAM_ERR_INVALID_ARGUMENT) usage_error(msg);
  data_error(msg);
}

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using SeriesPtr = std::unique_ptr<pinkam_series, HandleDeleter<pinkam_series, pinkam_series_free>>;
using SpectrumPtr =
    std::unique_ptr<pinkam_spectrum, HandleDeleter<pinkam_spectrum, pinkam_spectrum_free>>;
using TrajectoryPtr =
    std::unique_ptr<pinkam_trajectory, HandleDeleter<pinkam_trajectory, pinkam_trajectory_free>>;
using ModesPtr = std::unique_ptr<pinkam_modeset, HandleDeleter<pinkam_modeset, pinkam_modeset_free>>;
using TimelinePtr =
    std::unique_ptr<pinkam_timeline, HandleDeleter<pinkam_timeline, pinkam_timeline_free>>;
using MapPtr = std::unique_ptr<pinkam_slopemap, HandleDeleter<pinkam_slopemap, pinkam_slopemap_free>>;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) data_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::set<std::string> parse_formats(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item != "csv" && item != "wav" && item != "svg")
      usage_error("unknown format '" + item + "' (expected csv, wav or svg)");
    out.insert(item);
  }
  if (out.empty()) usage_error("--format needs at least one of csv, wav, svg");
  return out;
}

// --config accepts either a plain JSON object or a previously written
// manifest; in the latter case its embedded config is used, which is the
// rerun mechanism.
json load_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) data_error("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    data_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (doc.contains("command") && doc.contains("config")) {
    if (doc["command"] != command)
      usage_error("manifest '" + path + "' belongs to command '" +
                  doc["command"].get<std::string>() + "', not '" + command + "'");
    return doc["config"];
  }
  return doc;
}

// flags > config file > defaults
template <typename T>
void fallback(const CLI::Option* opt, T& value, const json& cfg, const char* key) {
  if (opt != nullptr && opt->count() > 0) return;
  if (cfg.contains(key)) value = cfg[key].get<T>();
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

pinkam_demod make_demod(const std::string& name, int power, int block_len, bool literal) {
  static const std::pair<const char*, int> table[] = {
      {"identity", PINKAM_DEMOD_IDENTITY},
      {"square", PINKAM_DEMOD_SQUARE},
      {"nth_power", PINKAM_DEMOD_NTH_POWER},
      {"abs", PINKAM_DEMOD_ABS},
      {"rect_pos", PINKAM_DEMOD_RECT_POS},
      {"rect_neg", PINKAM_DEMOD_RECT_NEG},
      {"thresh_above_mean", PINKAM_DEMOD_THRESH_ABOVE_MEAN},
      {"anti_thresh_below_mean", PINKAM_DEMOD_ANTI_THRESH_BELOW_MEAN},
      {"timing", PINKAM_DEMOD_TIMING},
      {"block_energy", PINKAM_DEMOD_BLOCK_ENERGY},
  };
  for (const auto& [n, kind] : table) {
    if (name == n) return pinkam_demod{kind, power, block_len, literal ? 1 : 0};
  }
  usage_error("unknown demodulation '" + name + "'");
}

json demod_json(const pinkam_demod& d, const std::string& name) {
  json j{{"kind", name}};
  if (d.kind == PINKAM_DEMOD_NTH_POWER) j["power"] = d.power;
  if (d.kind == PINKAM_DEMOD_BLOCK_ENERGY) j["block_len"] = d.block_len;
  if (d.kind == PINKAM_DEMOD_ANTI_THRESH_BELOW_MEAN) j["literal"] = d.literal_anti != 0;
  return j;
}

SeriesPtr load_input(const std::string& path, const std::string& channel, bool normalize_audio,
                     json* input_meta) {
  const auto ext = std::filesystem::path(path).extension().string();
  pinkam_series* raw = nullptr;
  bool is_audio = false;
  if (ext == ".wav" || ext == ".WAV") {
    int policy = PINKAM_CHANNEL_MIX_MEAN;
    if (channel == "left")
      policy = PINKAM_CHANNEL_LEFT;
    else if (channel == "right")
      policy = PINKAM_CHANNEL_RIGHT;
    else if (channel != "mix")
      usage_error("unknown channel policy '" + channel + "'");
    check(pinkam_series_read_wav(path.c_str(), policy, &raw));
    is_audio = true;
  } else if (ext == ".csv" || ext == ".CSV") {
    check(pinkam_series_read_csv(path.c_str(), &raw));
  } else {
    usage_error("input '" + path + "' must be a .wav or .csv file");
  }
  SeriesPtr series(raw);

  if (is_audio && normalize_audio) {
    const double* data = pinkam_series_data(series.get());
    const size_t n = pinkam_series_size(series.get());
    double peak = 0.0;
    for (size_t k = 0; k < n; ++k) peak = std::max(peak, std::abs(data[k]));
    if (peak <= 0.0) data_error("input '" + path + "' is silent");
    std::vector<double> scaled(data, data + n);
    for (double& v : scaled) v /= peak;
    pinkam_series* norm = nullptr;
    check(pinkam_series_create(scaled.data(), n, pinkam_series_rate(series.get()),
                               pinkam_series_origin(series.get()), &norm));
    series.reset(norm);
  }

  if (input_meta != nullptr) {
    (*input_meta)["path"] = path;
    (*input_meta)["samples"] = pinkam_series_size(series.get());
    (*input_meta)["rate_hz"] = pinkam_series_rate(series.get());
  }
  return series;
}

void write_series_outputs(const pinkam_series* series, const std::string& dir,
                          const std::string& stem, const std::set<std::string>& formats,
                          manifest::Writer& man) {
  if (formats.count("csv") != 0) {
    const std::string path = join_path(dir, stem + ".csv");
    check(pinkam_series_write_csv(series, path.c_str()));
    man.add_output(path);
  }
  if (formats.count("wav") != 0) {
    const std::string path = join_path(dir, stem + ".wav");
    check(pinkam_series_write_wav(series, path.c_str(), 0));
    man.add_output(path);
  }
}

/* ---- synth ---- */

struct SynthBeatArgs {
  double lambda = 1.0, omega = 100.0, duration = 10.0, rate = 1000.0;
};

struct SynthAccumArgs {
  int count = 1000;
  double scale = 0.01, omega = 100.0, xi_max = 10.0, duration = 60.0, rate = 1000.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

struct SynthHallArgs {
  std::string preset = "musikverein";
  std::vector<double> dims;
  double sound_speed = 343.0;
  int modes = 500;
  int index_start = 0;
  int reflections = 20;
  double alpha = 0.1;
  double duration = 30.0, rate = 1000.0;
};

void run_synth_beat(const SynthBeatArgs& a, const std::string& out_dir,
                    const std::set<std::string>& formats) {
  ensure_out_dir(out_dir);
  manifest::Writer man("synth beat", out_dir);
  man.set_config(json{{"kind", "beat"},
                      {"lambda_hz", a.lambda},
                      {"omega_hz", a.omega},
                      {"duration_s", a.duration},
                      {"rate_hz", a.rate}});
  pinkam_series* raw = nullptr;
  check(pinkam_synth_beat_pair(a.lambda, a.omega, a.duration, a.rate, &raw));
  SeriesPtr series(raw);
  write_series_outputs(series.get(), out_dir, "beat", formats, man);
  man.write();
}

void run_synth_accumulated(SynthAccumArgs a, const std::string& out_dir,
                           const std::set<std::string>& formats) {
  ensure_out_dir(out_dir);
  if (!a.seed_given) a.seed = fresh_seed();
  manifest::Writer man("synth accumulated", out_dir);
  man.set_config(json{{"kind", "accumulated"},
                      {"count", a.count},
                      {"scale", a.scale},
                      {"omega_hz", a.omega},
                      {"xi_max", a.xi_max},
                      {"seed", a.seed},
                      {"duration_s", a.duration},
                      {"rate_hz", a.rate}});
  man.set_seed(a.seed);
  const pinkam_accum_spec spec{a.omega, a.scale, a.count, a.xi_max, a.seed};
  pinkam_series* raw = nullptr;
  check(pinkam_synth_accumulated(&spec, a.duration, a.rate, &raw));
  SeriesPtr series(raw);
  write_series_outputs(series.get(), out_dir, "accumulated", formats, man);
  man.write();
}

void run_synth_hall(const SynthHallArgs& a, const std::string& out_dir,
                    const std::set<std::string>& formats) {
  ensure_out_dir(out_dir);
  pinkam_room room{};
  if (!a.dims.empty()) {
    if (a.dims.size() != 3) usage_error("--dims needs exactly three lengths in meters");
    room = pinkam_room{a.dims[0], a.dims[1], a.dims[2], a.sound_speed};
  } else {
    check(pinkam_room_preset(a.preset.c_str(), &room));
    room.sound_speed_mps = a.sound_speed;
  }

  manifest::Writer man("synth hall", out_dir);
  man.set_config(json{{"kind", "hall"},
                      {"l1_m", room.l1_m},
                      {"l2_m", room.l2_m},
                      {"l3_m", room.l3_m},
                      {"sound_speed_mps", room.sound_speed_mps},
                      {"modes", a.modes},
                      {"index_start", a.index_start},
                      {"reflections", a.reflections},
                      {"alpha", a.alpha},
                      {"duration_s", a.duration},
                      {"rate_hz", a.rate}});

  pinkam_modeset* modes_raw = nullptr;
  check(pinkam_room_modes(&room, a.modes, a.index_start, &modes_raw));
  ModesPtr modes(modes_raw);
  const std::string modes_path = join_path(out_dir, "modes.csv");
  check(pinkam_modeset_write_csv(modes.get(), modes_path.c_str()));
  man.add_output(modes_path);

  pinkam_series* phi_raw = nullptr;
  check(pinkam_synth_modes(modes.get(), a.duration, a.rate, &phi_raw));
  SeriesPtr phi(phi_raw);

  // --reverb 0 emits the bare mode superposition
  if (a.reflections > 0) {
    pinkam_series* rev = nullptr;
    check(pinkam_add_reverberation(phi.get(), &room, a.reflections, a.alpha, &rev));
    phi.reset(rev);
  }
  write_series_outputs(phi.get(), out_dir, "hall", formats, man);
  man.write();
}

/* ---- simulate ---- */

struct SimulateArgs {
  int n = 20;
  double coupling = 20.0;
  double freq_center = 100.0, freq_spread = 0.01;
  double dt = 1e-4, duration = 10.0, record_rate = 5000.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool no_reset = false;
  double reset_interval = 0.05;
  std::string reset_mode = "shift";
  std::vector<double> reset_amount = {0.0, 1.0};
  std::string reset_unit = "radians";
  bool include_psi = false;
};

json simulate_config_json(const std::string& model, const SimulateArgs& a) {
  return json{{"model", model},
              {"n", a.n},
              {"k", a.coupling},
              {"freq_center_hz", a.freq_center},
              {"freq_spread", a.freq_spread},
              {"dt_s", a.dt},
              {"duration_s", a.duration},
              {"record_rate_hz", a.record_rate},
              {"seed", a.seed},
              {"reset",
               json{{"enabled", !a.no_reset},
                    {"max_interval_s", a.reset_interval},
                    {"mode", a.reset_mode},
                    {"amount", a.reset_amount},
                    {"unit", a.reset_unit}}},
              {"psi", a.include_psi}};
}

pinkam_sim_config make_sim_config(const std::string& model, const SimulateArgs& a) {
  pinkam_sim_config c{};
  c.model = model == "skm2" ? PINKAM_MODEL_SECOND_ORDER : PINKAM_MODEL_FIRST_ORDER;
  c.n = a.n;
  c.coupling = a.coupling;
  c.freq_center_hz = a.freq_center;
  c.freq_spread = a.freq_spread;
  c.explicit_freqs = nullptr;
  c.dt_s = a.dt;
  c.duration_s = a.duration;
  c.record_rate_hz = a.record_rate;
  c.seed = a.seed;
  c.reset.enabled = a.no_reset ? 0 : 1;
  c.reset.max_interval_s = a.reset_interval;
  if (a.reset_mode == "shift")
    c.reset.mode = 0;
  else if (a.reset_mode == "reassign")
    c.reset.mode = 1;
  else
    usage_error("unknown reset mode '" + a.reset_mode + "'");
  if (a.reset_amount.size() != 2) usage_error("--reset-amount needs two values: LO HI");
  c.reset.amount_lo = a.reset_amount[0];
  c.reset.amount_hi = a.reset_amount[1];
  if (a.reset_unit == "radians")
    c.reset.unit = 0;
  else if (a.reset_unit == "turns")
    c.reset.unit = 1;
  else
    usage_error("unknown reset unit '" + a.reset_unit + "'");
  return c;
}

void run_simulate(const std::string& model, SimulateArgs a, const std::string& out_dir) {
  ensure_out_dir(out_dir);
  if (!a.seed_given) a.seed = fresh_seed();
  manifest::Writer man("simulate " + model, out_dir);
  man.set_config(simulate_config_json(model, a));
  man.set_seed(a.seed);

  const pinkam_sim_config config = make_sim_config(model, a);
  pinkam_trajectory* traj_raw = nullptr;
  check(pinkam_simulate(&config, &traj_raw));
  TrajectoryPtr traj(traj_raw);

  const std::string path = join_path(out_dir, "trajectory.csv");
  check(pinkam_trajectory_write_csv(traj.get(), path.c_str(), a.include_psi ? 1 : 0));
  man.add_output(path);
  man.write();
}

/* ---- analyze ---- */

struct AnalyzeArgs {
  std::string input;
  std::string channel = "mix";
  std::string demod = "block_energy";
  int power = 2;
  int block_len = 100;
  bool literal_anti = false;
  std::string estimator = "periodogram";
  int segments = 16;
  std::string taper = "rect";
  int bins_per_decade = 10;
  double fmin = 0.0;  // 0 = lowest binned frequency
  double fmax = 40.0;
  bool auto_knee = false;
  bool no_normalize = false;
};

void run_analyze(const AnalyzeArgs& a, const std::string& out_dir,
                 const std::set<std::string>& formats) {
  ensure_out_dir(out_dir);
  manifest::Writer man("analyze", out_dir);

  json input_meta;
  SeriesPtr series = load_input(a.input, a.channel, !a.no_normalize, &input_meta);
  man.add_input(a.input);

  const pinkam_demod demod = make_demod(a.demod, a.power, a.block_len, a.literal_anti);
  pinkam_series* env_raw = nullptr;
  check(pinkam_demodulate(series.get(), &demod, &env_raw));
  SeriesPtr env(env_raw);
  const double env_rate = pinkam_series_rate(env.get());

  int est = PINKAM_ESTIMATOR_PERIODOGRAM;
  if (a.estimator == "welch" || a.estimator == "segment_average")
    est = PINKAM_ESTIMATOR_SEGMENT_AVERAGE;
  else if (a.estimator != "periodogram")
    usage_error("unknown estimator '" + a.estimator + "'");
  if (a.taper != "rect" && a.taper != "hann") usage_error("unknown taper '" + a.taper + "'");

  pinkam_spectrum* spec_raw = nullptr;
  check(pinkam_psd(env.get(), est, a.segments, a.taper == "hann" ? 1 : 0, &spec_raw));
  SpectrumPtr spec(spec_raw);
  pinkam_spectrum* binned_raw = nullptr;
  check(pinkam_log_bin(spec.get(), a.bins_per_decade, &binned_raw));
  SpectrumPtr binned(binned_raw);

  const double* freqs = pinkam_spectrum_freqs(binned.get());
  const size_t n_bins = pinkam_spectrum_size(binned.get());
  if (n_bins == 0) data_error("analysis produced an empty spectrum");
  const double f_lo = a.fmin > 0.0 ? a.fmin : freqs[0];
  double f_hi = a.fmax;

  pinkam_fit fit{};
  if (a.auto_knee) {
    // Scan candidate cutoffs on the binned points for the best-r2 fit; an
    // explicit opt-in, never applied silently.
    bool found = false;
    for (size_t k = 0; k < n_bins; ++k) {
      const double candidate = freqs[k];
      if (candidate < f_lo * 10.0 || candidate > a.fmax) continue;
      pinkam_fit trial{};
      if (pinkam_fit_power_law(binned.get(), f_lo, candidate, &trial) != PINKAM_OK) continue;
      if (!found || trial.r2 > fit.r2) {
        fit = trial;
        f_hi = candidate;
        found = true;
      }
    }
    if (!found) data_error("auto-knee found no fittable cutoff below " + std::to_string(a.fmax));
  } else {
    check(pinkam_fit_power_law(binned.get(), f_lo, f_hi, &fit));
  }

  man.set_config(json{{"input", a.input},
                      {"channel", a.channel},
                      {"normalize", !a.no_normalize},
                      {"demod", demod_json(demod, a.demod)},
                      {"estimator", a.estimator},
                      {"segments", a.segments},
                      {"taper", a.taper},
                      {"bins_per_decade", a.bins_per_decade},
                      {"f_lo_hz", f_lo},
                      {"f_hi_hz", f_hi},
                      {"auto_knee", a.auto_knee}});

  const std::string spec_path = join_path(out_dir, "spectrum.csv");
  check(pinkam_spectrum_write_csv(binned.get(), spec_path.c_str()));
  man.add_output(spec_path);

  const int label = pinkam_classify_slope(fit.slope);
  json fit_doc{{"slope", fit.slope},
               {"intercept_log10_at_1hz", fit.intercept},
               {"f_lo_hz", fit.f_lo},
               {"f_hi_hz", fit.f_hi},
               {"r2", fit.r2},
               {"n_bins", fit.n_bins},
               {"class", pinkam_noise_class_name(label)},
               {"estimator", a.estimator},
               {"bins_per_decade", a.bins_per_decade},
               {"demod", demod_json(demod, a.demod)},
               {"envelope_rate_hz", env_rate},
               {"input", input_meta}};
  const std::string fit_path = join_path(out_dir, "fit.json");
  {
    std::ofstream out(fit_path);
    if (!out) data_error("cannot write '" + fit_path + "'");
    out << fit_doc.dump(2) << "\n";
  }
  man.add_output(fit_path);

  if (formats.count("svg") != 0) {
    const std::string svg_path = join_path(out_dir, "plot.svg");
    svg::write_loglog_spectrum(svg_path, freqs, pinkam_spectrum_psd(binned.get()), n_bins,
                               svg::FitLine{fit.slope, fit.intercept, fit.f_lo, fit.f_hi, fit.r2},
                               "PSD of " + std::filesystem::path(a.input).filename().string());
    man.add_output(svg_path);
  }
  man.write();

  std::cout << "slope " << fit.slope << " (" << pinkam_noise_class_name(label) << "), r2 " << fit.r2
            << ", fit [" << fit.f_lo << ", " << fit.f_hi << "] Hz, envelope rate " << env_rate
            << " Hz\n";
}

/* ---- slopes ---- */

struct SlopesArgs {
  std::string input;
  std::string channel = "mix";
  double window = 120.0, hop = 6.0;
  std::string demod = "square";
  int power = 2;
  int block_len = 100;
  bool literal_anti = false;
  int bins_per_decade = 10;
  double fmin = 0.1, fmax = 10.0;
  bool no_normalize = false;
};

void run_slopes(const SlopesArgs& a, const std::string& out_dir,
                const std::set<std::string>& formats) {
  ensure_out_dir(out_dir);
  manifest::Writer man("slopes", out_dir);
  SeriesPtr series = load_input(a.input, a.channel, !a.no_normalize, nullptr);
  man.add_input(a.input);

  const pinkam_demod demod = make_demod(a.demod, a.power, a.block_len, a.literal_anti);
  man.set_config(json{{"input", a.input},
                      {"channel", a.channel},
                      {"window_s", a.window},
                      {"hop_s", a.hop},
                      {"demod", demod_json(demod, a.demod)},
                      {"bins_per_decade", a.bins_per_decade},
                      {"f_lo_hz", a.fmin},
                      {"f_hi_hz", a.fmax},
                      {"normalize", !a.no_normalize}});

  pinkam_timeline* tl_raw = nullptr;
  check(pinkam_sliding_slopes(series.get(), a.window, a.hop, &demod, a.fmin, a.fmax,
                              a.bins_per_decade, &tl_raw));
  TimelinePtr tl(tl_raw);

  const std::string csv_path = join_path(out_dir, "slopes.csv");
  check(pinkam_timeline_write_csv(tl.get(), csv_path.c_str()));
  man.add_output(csv_path);

  if (formats.count("svg") != 0) {
    const std::string svg_path = join_path(out_dir, "slopes.svg");
    svg::write_timeline(svg_path, pinkam_timeline_times(tl.get()), pinkam_timeline_slopes(tl.get()),
                        pinkam_timeline_size(tl.get()),
                        "Slope timeline of " + std::filesystem::path(a.input).filename().string());
    man.add_output(svg_path);
  }
  man.write();
  std::cout << pinkam_timeline_size(tl.get()) << " windows\n";
}

/* ---- sweep ---- */

struct SweepArgs {
  std::string specfile;
  int threads = -1;  // -1: take from the spec
};

void run_sweep_cmd(const SweepArgs& a, const std::string& out_dir) {
  ensure_out_dir(out_dir);
  std::ifstream in(a.specfile);
  if (!in) data_error("cannot open sweep spec '" + a.specfile + "'");
  json spec_doc;
  try {
    in >> spec_doc;
  } catch (const json::parse_error& e) {
    data_error("sweep spec '" + a.specfile + "' is not valid JSON: " + e.what());
  }

  manifest::Writer man("sweep", out_dir);
  man.add_input(a.specfile);

  std::vector<int> n_values = spec_doc.value("n_values", std::vector<int>{});
  std::vector<double> k_values = spec_doc.value("k_values", std::vector<double>{});
  if (n_values.empty() || k_values.empty())
    data_error("sweep spec needs nonempty n_values and k_values");

  SimulateArgs base;
  base.coupling = 0.0;
  base.duration = spec_doc.value("duration", 10.0);
  base.dt = spec_doc.value("dt", 1e-4);
  base.record_rate = spec_doc.value("record_rate", 2000.0);
  base.freq_center = spec_doc.value("freq_center", 100.0);
  base.freq_spread = spec_doc.value("freq_spread", 0.01);
  const std::string model = spec_doc.value("model", std::string("skm1"));
  if (model != "skm1" && model != "skm2") data_error("sweep spec model must be skm1 or skm2");
  if (spec_doc.contains("reset")) {
    const json& r = spec_doc["reset"];
    base.no_reset = !r.value("enabled", true);
    base.reset_interval = r.value("max_interval", 0.05);
    base.reset_mode = r.value("mode", std::string("shift"));
    base.reset_amount = r.value("amount", std::vector<double>{0.0, 1.0});
    base.reset_unit = r.value("unit", std::string("radians"));
  }

  std::string demod_name = "square";
  pinkam_demod demod{PINKAM_DEMOD_SQUARE, 2, 100, 0};
  if (spec_doc.contains("demod")) {
    const json& d = spec_doc["demod"];
    demod_name = d.value("kind", std::string("square"));
    demod = make_demod(demod_name, d.value("power", 2), d.value("block_len", 100),
                       d.value("literal", false));
  }

  pinkam_sweep_spec spec{};
  spec.n_values = n_values.data();
  spec.n_count = n_values.size();
  spec.k_values = k_values.data();
  spec.k_count = k_values.size();
  spec.reps = spec_doc.value("reps", 1);
  spec.base = make_sim_config(model, base);
  spec.demod = demod;
  const json fit_doc = spec_doc.value("fit", json::object());
  spec.fit_lo_hz = fit_doc.value("f_lo", 0.2);
  spec.fit_hi_hz = fit_doc.value("f_hi", 20.0);
  spec.bins_per_decade = fit_doc.value("bins_per_decade", 10);
  spec.master_seed = spec_doc.value("master_seed", 1ull);
  spec.threads = a.threads >= 0 ? a.threads : spec_doc.value("threads", 1);

  man.set_config(spec_doc);
  man.set_seed(spec.master_seed);

  pinkam_slopemap* map_raw = nullptr;
  check(pinkam_run_sweep(&spec, &map_raw));
  MapPtr map(map_raw);

  const size_t rows = pinkam_slopemap_rows(map.get());
  const size_t cols = pinkam_slopemap_cols(map.get());
  std::vector<svg::HeatCell> heat(rows * cols);
  json cell_status = json::array();
  size_t failures = 0;
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      pinkam_sweep_cell cell{};
      check(pinkam_slopemap_cell(map.get(), r, c, &cell));
      heat[r * cols + c] = svg::HeatCell{cell.slope_mean, cell.label, cell.ok != 0};
      json status{{"n", cell.n}, {"k", cell.coupling}, {"ok", cell.ok != 0}};
      if (cell.ok) {
        status["slope_mean"] = cell.slope_mean;
        status["slope_std"] = cell.slope_std;
        status["class"] = pinkam_noise_class_name(cell.label);
      } else {
        status["error"] = pinkam_slopemap_cell_error(map.get(), r, c);
        std::cerr << "cell N=" << cell.n << " K=" << cell.coupling
                  << " failed: " << pinkam_slopemap_cell_error(map.get(), r, c) << "\n";
        ++failures;
      }
      cell_status.push_back(status);
    }
  }
  man.set_extra("cells", cell_status);

  const std::string csv_path = join_path(out_dir, "slopemap.csv");
  check(pinkam_slopemap_write_csv(map.get(), csv_path.c_str()));
  man.add_output(csv_path);

  const std::string svg_path = join_path(out_dir, "heatmap.svg");
  svg::write_heatmap(svg_path, n_values, k_values, heat, "PSD slope map (" + model + ")");
  man.add_output(svg_path);
  man.write();

  if (failures == rows * cols) data_error("every sweep cell failed");
  std::cout << (rows * cols - failures) << "/" << (rows * cols) << " cells fitted\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amplitude-modulation routes to 1/f spectra: synthesize, simulate, analyze"};
  app.set_version_flag("--version", pinkam_version());
  app.require_subcommand(1);

  std::string config_path;

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize test signals");
  synth->require_subcommand(1);

  SynthBeatArgs beat_args;
  std::string beat_out = ".", beat_formats = "csv";
  auto* beat = synth->add_subcommand("beat", "two-sine beat pair");
  auto* o_lambda = beat->add_option("--lambda", beat_args.lambda, "beat half-spacing in Hz");
  auto* o_omega = beat->add_option("--omega", beat_args.omega, "carrier frequency in Hz");
  auto* o_bdur = beat->add_option("--dur", beat_args.duration, "duration in s");
  auto* o_brate = beat->add_option("--rate", beat_args.rate, "sample rate in Hz");
  beat->add_option("--out", beat_out, "output directory");
  beat->add_option("--format", beat_formats, "comma list of csv,wav");
  beat->add_option("--config", config_path, "JSON config or manifest to rerun");

  SynthAccumArgs acc_args;
  std::string acc_out = ".", acc_formats = "csv";
  auto* acc = synth->add_subcommand("accumulated", "superposition with crowding frequencies");
  auto* o_an = acc->add_option("--n", acc_args.count, "number of components");
  auto* o_ac = acc->add_option("--c", acc_args.scale, "offset scale");
  auto* o_aomega = acc->add_option("--omega", acc_args.omega, "base frequency in Hz");
  auto* o_axi = acc->add_option("--xi-max", acc_args.xi_max, "upper bound of the exponent draw");
  auto* o_aseed = acc->add_option("--seed", acc_args.seed, "RNG seed");
  auto* o_adur = acc->add_option("--dur", acc_args.duration, "duration in s");
  auto* o_arate = acc->add_option("--rate", acc_args.rate, "sample rate in Hz");
  acc->add_option("--out", acc_out, "output directory");
  acc->add_option("--format", acc_formats, "comma list of csv,wav");
  acc->add_option("--config", config_path, "JSON config or manifest to rerun");

  SynthHallArgs hall_args;
  std::string hall_out = ".", hall_formats = "csv";
  auto* hall = synth->add_subcommand("hall", "room eigenmode superposition with reverberation");
  auto* o_hpreset = hall->add_option("--preset", hall_args.preset, "room preset name");
  auto* o_hdims = hall->add_option("--dims", hall_args.dims, "explicit L1 L2 L3 in meters")
                      ->expected(3);
  auto* o_hvs = hall->add_option("--sound-speed", hall_args.sound_speed, "sound speed in m/s");
  auto* o_hmodes = hall->add_option("--modes", hall_args.modes, "number of lowest eigenmodes");
  auto* o_hstart = hall->add_option("--index-start", hall_args.index_start, "mode indices from 0 or 1");
  auto* o_hrev = hall->add_option("--reverb", hall_args.reflections, "reflections per axis (0 = none)");
  auto* o_halpha = hall->add_option("--alpha", hall_args.alpha, "reflection power decay exponent");
  auto* o_hdur = hall->add_option("--dur", hall_args.duration, "duration in s");
  auto* o_hrate = hall->add_option("--rate", hall_args.rate, "sample rate in Hz");
  hall->add_option("--out", hall_out, "output directory");
  hall->add_option("--format", hall_formats, "comma list of csv,wav");
  hall->add_option("--config", config_path, "JSON config or manifest to rerun");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "stochastic Kuramoto ensembles");
  simulate->require_subcommand(1);
  SimulateArgs sim_args;
  std::string sim_out = ".";
  struct SimOpts {
    CLI::Option *n, *k, *fc, *fs, *dt, *dur, *rr, *seed, *ri, *rm, *ra, *ru;
  };
  auto add_sim_options = [&](CLI::App* cmd) {
    SimOpts o{};
    o.n = cmd->add_option("--n", sim_args.n, "oscillator count");
    o.k = cmd->add_option("--k", sim_args.coupling, "coupling strength");
    o.fc = cmd->add_option("--freq-center", sim_args.freq_center, "center frequency in Hz");
    o.fs = cmd->add_option("--freq-spread", sim_args.freq_spread, "fractional half-width");
    o.dt = cmd->add_option("--dt", sim_args.dt, "integration step in s");
    o.dur = cmd->add_option("--dur", sim_args.duration, "duration in s");
    o.rr = cmd->add_option("--record-rate", sim_args.record_rate, "recording rate in Hz");
    o.seed = cmd->add_option("--seed", sim_args.seed, "RNG seed (omitted: generated)");
    cmd->add_flag("--no-reset", sim_args.no_reset, "disable reset noise");
    o.ri = cmd->add_option("--reset-interval", sim_args.reset_interval, "max gap between resets in s");
    o.rm = cmd->add_option("--reset-mode", sim_args.reset_mode, "shift or reassign");
    o.ra = cmd->add_option("--reset-amount", sim_args.reset_amount, "amount range LO HI")->expected(2);
    o.ru = cmd->add_option("--reset-unit", sim_args.reset_unit, "radians or turns");
    cmd->add_flag("--psi", sim_args.include_psi, "include the order-parameter phase column");
    cmd->add_option("--out", sim_out, "output directory");
    cmd->add_option("--config", config_path, "JSON config or manifest to rerun");
    return o;
  };
  auto* skm1 = simulate->add_subcommand("skm1", "first-order model");
  const SimOpts skm1_opts = add_sim_options(skm1);
  auto* skm2 = simulate->add_subcommand("skm2", "second-order model (inertia form)");
  const SimOpts skm2_opts = add_sim_options(skm2);

  // analyze
  AnalyzeArgs an_args;
  std::string an_out = ".", an_formats = "csv,svg";
  auto* analyze = app.add_subcommand("analyze", "PSD power-law fit of a WAV or series CSV");
  analyze->add_option("input", an_args.input, "input .wav or .csv")->required();
  analyze->add_option("--channel", an_args.channel, "stereo policy: mix, left, right");
  auto* o_demod = analyze->add_option("--demod", an_args.demod, "demodulation transform");
  auto* o_power = analyze->add_option("--power", an_args.power, "exponent for nth_power");
  auto* o_block = analyze->add_option("--block", an_args.block_len, "block length for block_energy");
  analyze->add_flag("--anti-literal", an_args.literal_anti,
                    "literal formula variant of anti-thresholding");
  auto* o_est = analyze->add_option("--estimator", an_args.estimator, "periodogram or welch");
  auto* o_segs = analyze->add_option("--segments", an_args.segments, "segments for welch");
  auto* o_taper = analyze->add_option("--taper", an_args.taper, "rect or hann");
  auto* o_bpd = analyze->add_option("--bins-per-decade", an_args.bins_per_decade, "log bin density");
  auto* o_fmin = analyze->add_option("--fmin", an_args.fmin, "fit lower bound in Hz (0 = lowest bin)");
  auto* o_fmax = analyze->add_option("--fmax", an_args.fmax, "fit upper bound in Hz");
  analyze->add_flag("--auto-knee", an_args.auto_knee, "pick the cutoff maximizing r2");
  analyze->add_flag("--no-normalize", an_args.no_normalize, "skip unit-peak audio normalization");
  analyze->add_option("--out", an_out, "output directory");
  analyze->add_option("--format", an_formats, "comma list of csv,svg");
  analyze->add_option("--config", config_path, "JSON config or manifest to rerun");

  // slopes
  SlopesArgs sl_args;
  std::string sl_out = ".", sl_formats = "csv,svg";
  auto* slopes = app.add_subcommand("slopes", "sliding-window slope timeline");
  slopes->add_option("input", sl_args.input, "input .wav or .csv")->required();
  slopes->add_option("--channel", sl_args.channel, "stereo policy: mix, left, right");
  auto* o_win = slopes->add_option("--window", sl_args.window, "window length in s");
  auto* o_hop = slopes->add_option("--hop", sl_args.hop, "hop in s");
  auto* o_sdemod = slopes->add_option("--demod", sl_args.demod, "demodulation transform");
  auto* o_spower = slopes->add_option("--power", sl_args.power, "exponent for nth_power");
  auto* o_sblock = slopes->add_option("--block", sl_args.block_len, "block length for block_energy");
  slopes->add_flag("--anti-literal", sl_args.literal_anti,
                   "literal formula variant of anti-thresholding");
  auto* o_sbpd = slopes->add_option("--bins-per-decade", sl_args.bins_per_decade, "log bin density");
  auto* o_sfmin = slopes->add_option("--fmin", sl_args.fmin, "fit lower bound in Hz");
  auto* o_sfmax = slopes->add_option("--fmax", sl_args.fmax, "fit upper bound in Hz");
  slopes->add_flag("--no-normalize", sl_args.no_normalize, "skip unit-peak audio normalization");
  slopes->add_option("--out", sl_out, "output directory");
  slopes->add_option("--format", sl_formats, "comma list of csv,svg");
  slopes->add_option("--config", config_path, "JSON config or manifest to rerun");

  // sweep
  SweepArgs sw_args;
  std::string sw_out = ".";
  auto* sweep = app.add_subcommand("sweep", "grid of SKM runs over (N, K)");
  sweep->add_option("spec", sw_args.specfile, "sweep spec JSON file")->required();
  sweep->add_option("--threads", sw_args.threads, "worker threads (0 = hardware)");
  sweep->add_option("--out", sw_out, "output directory");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return 0;  // --help / --version
      std::cerr << e.what() << "\n";
      return 1;
    }

    if (beat->parsed()) {
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "synth beat");
        fallback(o_lambda, beat_args.lambda, cfg, "lambda_hz");
        fallback(o_omega, beat_args.omega, cfg, "omega_hz");
        fallback(o_bdur, beat_args.duration, cfg, "duration_s");
        fallback(o_brate, beat_args.rate, cfg, "rate_hz");
      }
      run_synth_beat(beat_args, beat_out, parse_formats(beat_formats));
    } else if (acc->parsed()) {
      acc_args.seed_given = o_aseed->count() > 0;
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "synth accumulated");
        fallback(o_an, acc_args.count, cfg, "count");
        fallback(o_ac, acc_args.scale, cfg, "scale");
        fallback(o_aomega, acc_args.omega, cfg, "omega_hz");
        fallback(o_axi, acc_args.xi_max, cfg, "xi_max");
        fallback(o_adur, acc_args.duration, cfg, "duration_s");
        fallback(o_arate, acc_args.rate, cfg, "rate_hz");
        if (o_aseed->count() == 0 && cfg.contains("seed")) {
          acc_args.seed = cfg["seed"].get<std::uint64_t>();
          acc_args.seed_given = true;
        }
      }
      run_synth_accumulated(acc_args, acc_out, parse_formats(acc_formats));
    } else if (hall->parsed()) {
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "synth hall");
        if (o_hdims->count() == 0 && cfg.contains("l1_m")) {
          hall_args.dims = {cfg["l1_m"].get<double>(), cfg["l2_m"].get<double>(),
                            cfg["l3_m"].get<double>()};
        }
        fallback(o_hpreset, hall_args.preset, cfg, "preset");
        fallback(o_hvs, hall_args.sound_speed, cfg, "sound_speed_mps");
        fallback(o_hmodes, hall_args.modes, cfg, "modes");
        fallback(o_hstart, hall_args.index_start, cfg, "index_start");
        fallback(o_hrev, hall_args.reflections, cfg, "reflections");
        fallback(o_halpha, hall_args.alpha, cfg, "alpha");
        fallback(o_hdur, hall_args.duration, cfg, "duration_s");
        fallback(o_hrate, hall_args.rate, cfg, "rate_hz");
      }
      run_synth_hall(hall_args, hall_out, parse_formats(hall_formats));
    } else if (skm1->parsed() || skm2->parsed()) {
      const std::string model = skm1->parsed() ? "skm1" : "skm2";
      const SimOpts& opts = skm1->parsed() ? skm1_opts : skm2_opts;
      sim_args.seed_given = opts.seed->count() > 0;
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "simulate " + model);
        fallback(opts.n, sim_args.n, cfg, "n");
        fallback(opts.k, sim_args.coupling, cfg, "k");
        fallback(opts.fc, sim_args.freq_center, cfg, "freq_center_hz");
        fallback(opts.fs, sim_args.freq_spread, cfg, "freq_spread");
        fallback(opts.dt, sim_args.dt, cfg, "dt_s");
        fallback(opts.dur, sim_args.duration, cfg, "duration_s");
        fallback(opts.rr, sim_args.record_rate, cfg, "record_rate_hz");
        if (opts.seed->count() == 0 && cfg.contains("seed")) {
          sim_args.seed = cfg["seed"].get<std::uint64_t>();
          sim_args.seed_given = true;
        }
        if (cfg.contains("reset")) {
          const json& r = cfg["reset"];
          if (r.contains("enabled")) sim_args.no_reset = !r["enabled"].get<bool>();
          fallback(opts.ri, sim_args.reset_interval, r, "max_interval_s");
          fallback(opts.rm, sim_args.reset_mode, r, "mode");
          fallback(opts.ra, sim_args.reset_amount, r, "amount");
          fallback(opts.ru, sim_args.reset_unit, r, "unit");
        }
        if (cfg.contains("psi")) sim_args.include_psi = cfg["psi"].get<bool>();
      }
      run_simulate(model, sim_args, sim_out);
    } else if (analyze->parsed()) {
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "analyze");
        if (cfg.contains("demod") && cfg.at("demod").is_object()) {
          const json& d = cfg.at("demod");
          fallback(o_demod, an_args.demod, d, "kind");
          fallback(o_power, an_args.power, d, "power");
          fallback(o_block, an_args.block_len, d, "block_len");
        }
        fallback(o_est, an_args.estimator, cfg, "estimator");
        fallback(o_segs, an_args.segments, cfg, "segments");
        fallback(o_taper, an_args.taper, cfg, "taper");
        fallback(o_bpd, an_args.bins_per_decade, cfg, "bins_per_decade");
        fallback(o_fmin, an_args.fmin, cfg, "f_lo_hz");
        fallback(o_fmax, an_args.fmax, cfg, "f_hi_hz");
      }
      run_analyze(an_args, an_out, parse_formats(an_formats));
    } else if (slopes->parsed()) {
      if (!config_path.empty()) {
        const json cfg = load_config_file(config_path, "slopes");
        fallback(o_win, sl_args.window, cfg, "window_s");
        fallback(o_hop, sl_args.hop, cfg, "hop_s");
        if (cfg.contains("demod") && cfg["demod"].is_object()) {
          fallback(o_sdemod, sl_args.demod, cfg["demod"], "kind");
          fallback(o_spower, sl_args.power, cfg["demod"], "power");
          fallback(o_sblock, sl_args.block_len, cfg["demod"], "block_len");
        }
        fallback(o_sbpd, sl_args.bins_per_decade, cfg, "bins_per_decade");
        fallback(o_sfmin, sl_args.fmin, cfg, "f_lo_hz");
        fallback(o_sfmax, sl_args.fmax, cfg, "f_hi_hz");
      }
      run_slopes(sl_args, sl_out, parse_formats(sl_formats));
    } else if (sweep->parsed()) {
      run_sweep_cmd(sw_args, sw_out);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
