#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/kuramoto.hpp"
#include "core/spectral.hpp"

namespace pinkam {

/// Grid of SKM simulations over (N, K); each cell is simulated, demodulated,
/// and fitted for its low-frequency PSD slope.
struct SweepSpec {
  std::vector<int> n_values;
  std::vector<double> k_values;
  int reps = 1;
  EnsembleConfig base;  // n, coupling and seed are overridden per cell
  DemodMethod demod;
  double fit_lo = 0.2;  // Hz
  double fit_hi = 20.0;
  int bins_per_decade = 10;
  std::uint64_t master_seed = 1;
  int threads = 1;  // 0 = hardware concurrency
};

struct SweepCell {
  int n = 0;
  double coupling = 0.0;
  bool ok = false;
  double slope_mean = 0.0;
  double slope_std = 0.0;
  NoiseClass label = NoiseClass::other;
  std::vector<double> rep_slopes;
  std::string error;
};

struct SlopeMap {
  std::vector<SweepCell> cells;  // row-major: n outer, k inner
  std::size_t n_count = 0;
  std::size_t k_count = 0;

  const SweepCell& at(std::size_t ni, std::size_t ki) const { return cells[ni * k_count + ki]; }
};

/// Stable per-cell seed so results do not depend on execution order and
/// removing cells leaves the others untouched.
std::uint64_t derive_cell_seed(std::uint64_t master, int n, double coupling, int rep);

/// Runs every cell (possibly across a thread pool); per-cell failures are
/// recorded in the map instead of aborting the sweep.
SlopeMap run_sweep(const SweepSpec& spec);

struct RegionStats {
  double mean_slope = 0.0;
  double std_slope = 0.0;
  double pink_fraction = 0.0;
  std::size_t cells = 0;
};

struct RegionSummary {
  RegionStats diagonal;         // |N - K| <= band
  RegionStats resonance;        // N - K > band
  RegionStats synchronization;  // K - N > band
  double band = 0.0;
};

RegionSummary summarize_regions(const SlopeMap& map, double band = 10.0);

}  // namespace pinkam
