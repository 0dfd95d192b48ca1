#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <pinkam/pinkam.h>

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("pinkam_capi_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

pinkam_sim_config default_sim() {
  pinkam_sim_config c{};
  c.model = PINKAM_MODEL_FIRST_ORDER;
  c.n = 20;
  c.coupling = 20.0;
  c.freq_center_hz = 100.0;
  c.freq_spread = 0.01;
  c.explicit_freqs = nullptr;
  c.dt_s = 1e-4;
  c.duration_s = 1.0;
  c.record_rate_hz = 1000.0;
  c.seed = 1;
  c.reset = pinkam_reset_policy{1, 0.05, 0, 0.0, 1.0, 0};
  return c;
}

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::strlen(pinkam_version()) > 0);
  pinkam_series* out = nullptr;
  CHECK(pinkam_synth_beat_pair(-1.0, 100.0, 1.0, 1000.0, &out) == PINKAM_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(pinkam_last_error()) > 0);
  CHECK(out == nullptr);
  CHECK(pinkam_series_create(nullptr, 4, 10.0, 0.0, &out) == PINKAM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("series lifecycle and accessors") {
  const double data[] = {1.0, -2.0, 3.0};
  pinkam_series* s = nullptr;
  REQUIRE(pinkam_series_create(data, 3, 10.0, 0.5, &s) == PINKAM_OK);
  CHECK(pinkam_series_size(s) == 3);
  CHECK(pinkam_series_rate(s) == 10.0);
  CHECK(pinkam_series_origin(s) == 0.5);
  CHECK(pinkam_series_data(s)[1] == -2.0);
  pinkam_series_free(s);
  pinkam_series_free(nullptr);  // harmless
}

TEST_CASE("synthesis, demodulation and the spectral chain through the C surface") {
  pinkam_series* beat = nullptr;
  REQUIRE(pinkam_synth_beat_pair(1.0, 100.0, 10.0, 1000.0, &beat) == PINKAM_OK);
  CHECK(pinkam_series_size(beat) == 10000);

  const pinkam_demod square{PINKAM_DEMOD_SQUARE, 2, 100, 0};
  pinkam_series* sq = nullptr;
  REQUIRE(pinkam_demodulate(beat, &square, &sq) == PINKAM_OK);

  pinkam_spectrum* spec = nullptr;
  REQUIRE(pinkam_psd(sq, PINKAM_ESTIMATOR_PERIODOGRAM, 1, 0, &spec) == PINKAM_OK);
  pinkam_spectrum* binned = nullptr;
  REQUIRE(pinkam_log_bin(spec, 10, &binned) == PINKAM_OK);
  CHECK(pinkam_spectrum_size(binned) > 0);
  CHECK(pinkam_spectrum_size(binned) < pinkam_spectrum_size(spec));

  // dominant low bin of the squared beat sits at 2*lambda
  const double* freqs = pinkam_spectrum_freqs(spec);
  const double* psd = pinkam_spectrum_psd(spec);
  double best_f = 0.0, best_p = -1.0;
  for (size_t k = 0; k < pinkam_spectrum_size(spec); ++k) {
    if (freqs[k] > 50.0) break;
    if (psd[k] > best_p) {
      best_p = psd[k];
      best_f = freqs[k];
    }
  }
  CHECK(best_f == doctest::Approx(2.0));

  pinkam_fit fit{};
  CHECK(pinkam_fit_power_law(binned, 1000.0, 2000.0, &fit) == PINKAM_ERR_INVALID_ARGUMENT);

  pinkam_series* sup = nullptr;
  REQUIRE(pinkam_delayed_superposition(beat, 0.5, &sup) == PINKAM_OK);
  CHECK(pinkam_series_size(sup) == 10000 - 500);

  pinkam_series_free(sup);
  pinkam_spectrum_free(binned);
  pinkam_spectrum_free(spec);
  pinkam_series_free(sq);
  pinkam_series_free(beat);
}

TEST_CASE("accumulated spec frequencies land in the documented band") {
  const pinkam_accum_spec spec{100.0, 0.01, 64, 10.0, 5};
  std::vector<double> freqs(64);
  REQUIRE(pinkam_accum_frequencies(&spec, freqs.data()) == PINKAM_OK);
  for (double f : freqs) {
    CHECK(f > 100.0);
    CHECK(f <= 101.0);
  }
  pinkam_series* acc = nullptr;
  REQUIRE(pinkam_synth_accumulated(&spec, 1.0, 1000.0, &acc) == PINKAM_OK);
  CHECK(pinkam_series_size(acc) == 1000);
  pinkam_series_free(acc);
}

TEST_CASE("simulation through the C surface") {
  const pinkam_sim_config config = default_sim();
  pinkam_trajectory* traj = nullptr;
  REQUIRE(pinkam_simulate(&config, &traj) == PINKAM_OK);
  CHECK(pinkam_trajectory_size(traj) == 1000);
  CHECK(pinkam_trajectory_rate(traj) == 1000.0);
  const double* r = pinkam_trajectory_r(traj);
  const double* x = pinkam_trajectory_x(traj);
  const double* psi = pinkam_trajectory_psi(traj);
  for (size_t k = 0; k < 1000; ++k) {
    CHECK(r[k] >= 0.0);
    CHECK(r[k] <= 1.0);
    CHECK(std::abs(x[k] - r[k] * std::sin(psi[k])) < 1e-12);
  }
  pinkam_trajectory_free(traj);

  pinkam_sim_config bad = config;
  bad.dt_s = 1.0;
  CHECK(pinkam_simulate(&bad, &traj) == PINKAM_ERR_INVALID_ARGUMENT);

  pinkam_series* single = nullptr;
  REQUIRE(pinkam_simulate_observable(&config, PINKAM_OBSERVABLE_SINGLE, 0, &single) == PINKAM_OK);
  CHECK(pinkam_series_size(single) == 1000);
  pinkam_series_free(single);
  CHECK(pinkam_simulate_observable(&config, PINKAM_OBSERVABLE_SINGLE, 99, &single) ==
        PINKAM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("resonance through the C surface") {
  pinkam_room room{};
  REQUIRE(pinkam_room_preset("musikverein", &room) == PINKAM_OK);
  CHECK(room.l1_m == doctest::Approx(48.8));
  CHECK(pinkam_room_preset("carnegie", &room) == PINKAM_ERR_INVALID_ARGUMENT);

  pinkam_modeset* modes = nullptr;
  REQUIRE(pinkam_room_modes(&room, 10, 0, &modes) == PINKAM_OK);
  CHECK(pinkam_modeset_size(modes) == 10);
  int n1 = 0, n2 = 0, n3 = 0;
  double f = 0.0;
  REQUIRE(pinkam_modeset_get(modes, 0, &n1, &n2, &n3, &f) == PINKAM_OK);
  CHECK(f == doctest::Approx(3.514).epsilon(1e-3));
  CHECK(pinkam_modeset_get(modes, 99, &n1, &n2, &n3, &f) == PINKAM_ERR_INVALID_ARGUMENT);

  pinkam_series* phi = nullptr;
  REQUIRE(pinkam_synth_modes(modes, 2.0, 1000.0, &phi) == PINKAM_OK);
  pinkam_series* rev = nullptr;
  REQUIRE(pinkam_add_reverberation(phi, &room, 2, 0.1, &rev) == PINKAM_OK);
  CHECK(pinkam_series_size(rev) == pinkam_series_size(phi));

  CHECK(pinkam_lorentzian_gain(10.0, 10.0, 4.0) == doctest::Approx(0.25));
  CHECK(std::isnan(pinkam_lorentzian_gain(10.0, 10.0, 0.0)));
  pinkam_series* filtered = nullptr;
  REQUIRE(pinkam_apply_lorentzian(phi, 10.0, 2.0, &filtered) == PINKAM_OK);

  pinkam_series_free(filtered);
  pinkam_series_free(rev);
  pinkam_series_free(phi);
  pinkam_modeset_free(modes);
}

TEST_CASE("classification and sliding slopes through the C surface") {
  CHECK(pinkam_classify_slope(-1.01) == PINKAM_NOISE_PINK);
  CHECK(pinkam_classify_slope(0.25) == PINKAM_NOISE_WHITE);
  CHECK(pinkam_classify_slope(-2.0) == PINKAM_NOISE_BROWN);
  CHECK(pinkam_classify_slope(-1.35) == PINKAM_NOISE_OTHER);
  CHECK(pinkam_classify_slope(std::nan("")) == -1);
  CHECK(std::string(pinkam_noise_class_name(PINKAM_NOISE_PINK)) == "pink");

  // 60 s of noise, 10 s windows, 5 s hop -> 11 windows
  std::vector<double> noise(6000);
  std::uint64_t s = 12345;
  for (auto& v : noise) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    v = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
  pinkam_series* series = nullptr;
  REQUIRE(pinkam_series_create(noise.data(), noise.size(), 100.0, 0.0, &series) == PINKAM_OK);
  const pinkam_demod identity{PINKAM_DEMOD_IDENTITY, 2, 100, 0};
  pinkam_timeline* tl = nullptr;
  REQUIRE(pinkam_sliding_slopes(series, 10.0, 5.0, &identity, 1.0, 40.0, 10, &tl) == PINKAM_OK);
  CHECK(pinkam_timeline_size(tl) == 11);
  CHECK(pinkam_timeline_times(tl)[0] == doctest::Approx(5.0));
  CHECK(std::abs(pinkam_timeline_slopes(tl)[0]) < 1.0);
  pinkam_timeline_free(tl);
  pinkam_series_free(series);
}

TEST_CASE("file IO through the C surface") {
  TempDir dir;
  pinkam_series* beat = nullptr;
  REQUIRE(pinkam_synth_beat_pair(1.0, 100.0, 1.0, 1000.0, &beat) == PINKAM_OK);

  const std::string csv = dir.file("beat.csv");
  REQUIRE(pinkam_series_write_csv(beat, csv.c_str()) == PINKAM_OK);
  pinkam_series* back = nullptr;
  REQUIRE(pinkam_series_read_csv(csv.c_str(), &back) == PINKAM_OK);
  CHECK(pinkam_series_size(back) == 1000);
  CHECK(std::memcmp(pinkam_series_data(back), pinkam_series_data(beat), 1000 * sizeof(double)) == 0);
  pinkam_series_free(back);

  const std::string wav = dir.file("beat.wav");
  REQUIRE(pinkam_series_write_wav(beat, wav.c_str(), 1) == PINKAM_OK);
  pinkam_series* wback = nullptr;
  REQUIRE(pinkam_series_read_wav(wav.c_str(), PINKAM_CHANNEL_MIX_MEAN, &wback) == PINKAM_OK);
  CHECK(pinkam_series_size(wback) == 1000);
  pinkam_series_free(wback);

  CHECK(pinkam_series_read_csv(dir.file("missing.csv").c_str(), &back) == PINKAM_ERR_IO);
  pinkam_series_free(beat);
}

TEST_CASE("sweep through the C surface") {
  const int n_values[] = {10, 20};
  const double k_values[] = {10.0, 20.0};
  pinkam_sweep_spec spec{};
  spec.n_values = n_values;
  spec.n_count = 2;
  spec.k_values = k_values;
  spec.k_count = 2;
  spec.reps = 1;
  spec.base = default_sim();
  spec.base.duration_s = 2.0;
  spec.demod = pinkam_demod{PINKAM_DEMOD_SQUARE, 2, 100, 0};
  spec.fit_lo_hz = 1.0;
  spec.fit_hi_hz = 100.0;
  spec.bins_per_decade = 10;
  spec.master_seed = 7;
  spec.threads = 2;

  pinkam_slopemap* map = nullptr;
  REQUIRE(pinkam_run_sweep(&spec, &map) == PINKAM_OK);
  CHECK(pinkam_slopemap_rows(map) == 2);
  CHECK(pinkam_slopemap_cols(map) == 2);
  pinkam_sweep_cell cell{};
  REQUIRE(pinkam_slopemap_cell(map, 1, 1, &cell) == PINKAM_OK);
  CHECK(cell.n == 20);
  CHECK(cell.coupling == 20.0);
  CHECK(cell.ok == 1);
  CHECK(std::isfinite(cell.slope_mean));
  CHECK(pinkam_slopemap_cell(map, 5, 5, &cell) == PINKAM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pinkam_slopemap_cell_error(map, 1, 1)).empty());

  pinkam_region_stats diag{}, res{}, sync{};
  REQUIRE(pinkam_summarize_regions(map, 5.0, &diag, &res, &sync) == PINKAM_OK);
  CHECK(diag.cells + res.cells + sync.cells == 4);

  TempDir dir;
  const std::string csv = dir.file("map.csv");
  REQUIRE(pinkam_slopemap_write_csv(map, csv.c_str()) == PINKAM_OK);
  pinkam_slopemap_free(map);
}
