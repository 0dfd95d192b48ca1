#include "core/sweep.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "core/rng.hpp"

namespace pinkam {

namespace {

double cell_slope(const SweepSpec& spec, int n, double coupling, int rep) {
  EnsembleConfig config = spec.base;
  config.n = n;
  config.coupling = coupling;
  config.seed = derive_cell_seed(spec.master_seed, n, coupling, rep);
  const Trajectory traj = simulate(config);
  const TimeSeries env = demodulate(traj.x, spec.demod);
  const Spectrum binned = log_bin(psd(env, Estimator::periodogram), spec.bins_per_decade);
  return fit_power_law(binned, spec.fit_lo, spec.fit_hi).slope;
}

void run_cell(const SweepSpec& spec, SweepCell& cell) {
  try {
    cell.rep_slopes.reserve(static_cast<std::size_t>(spec.reps));
    for (int rep = 0; rep < spec.reps; ++rep) {
      cell.rep_slopes.push_back(cell_slope(spec, cell.n, cell.coupling, rep));
    }
    double mean = 0.0;
    for (double s : cell.rep_slopes) mean += s;
    mean /= static_cast<double>(cell.rep_slopes.size());
    double var = 0.0;
    for (double s : cell.rep_slopes) var += (s - mean) * (s - mean);
    cell.slope_mean = mean;
    cell.slope_std =
        cell.rep_slopes.size() > 1 ? std::sqrt(var / static_cast<double>(cell.rep_slopes.size() - 1)) : 0.0;
    cell.label = classify_slope(mean);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.slope_mean = std::numeric_limits<double>::quiet_NaN();
    cell.slope_std = std::numeric_limits<double>::quiet_NaN();
    cell.error = e.what();
  }
}

RegionStats finalize(const std::vector<double>& slopes) {
  RegionStats st;
  st.cells = slopes.size();
  if (slopes.empty()) return st;
  double mean = 0.0;
  std::size_t pink = 0;
  for (double s : slopes) {
    mean += s;
    if (classify_slope(s) == NoiseClass::pink) ++pink;
  }
  mean /= static_cast<double>(slopes.size());
  double var = 0.0;
  for (double s : slopes) var += (s - mean) * (s - mean);
  st.mean_slope = mean;
  st.std_slope = slopes.size() > 1 ? std::sqrt(var / static_cast<double>(slopes.size() - 1)) : 0.0;
  st.pink_fraction = static_cast<double>(pink) / static_cast<double>(slopes.size());
  return st;
}

}  // namespace

std::uint64_t derive_cell_seed(std::uint64_t master, int n, double coupling, int rep) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(n)));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(coupling));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(rep)));
  return h;
}

SlopeMap run_sweep(const SweepSpec& spec) {
  if (spec.n_values.empty() || spec.k_values.empty())
    throw std::invalid_argument("sweep: value lists must be nonempty");
  if (spec.reps < 1) throw std::invalid_argument("sweep: reps must be >= 1");

  SlopeMap map;
  map.n_count = spec.n_values.size();
  map.k_count = spec.k_values.size();
  map.cells.resize(map.n_count * map.k_count);
  for (std::size_t ni = 0; ni < map.n_count; ++ni) {
    for (std::size_t ki = 0; ki < map.k_count; ++ki) {
      SweepCell& cell = map.cells[ni * map.k_count + ki];
      cell.n = spec.n_values[ni];
      cell.coupling = spec.k_values[ki];
    }
  }

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(map.cells.size()));

  if (workers <= 1) {
    for (SweepCell& cell : map.cells) run_cell(spec, cell);
    return map;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= map.cells.size()) return;
        run_cell(spec, map.cells[idx]);
      }
    });
  }
  for (auto& th : pool) th.join();
  return map;
}

RegionSummary summarize_regions(const SlopeMap& map, double band) {
  std::set<int> distinct_n;
  std::set<double> distinct_k;
  for (const SweepCell& c : map.cells) {
    distinct_n.insert(c.n);
    distinct_k.insert(c.coupling);
  }
  if (distinct_n.size() < 2 || distinct_k.size() < 2)
    throw std::invalid_argument("sweep: region summary needs at least 2 distinct N and K values");

  std::vector<double> diag, res, sync;
  for (const SweepCell& c : map.cells) {
    if (!c.ok) continue;
    const double d = static_cast<double>(c.n) - c.coupling;
    if (std::abs(d) <= band)
      diag.push_back(c.slope_mean);
    else if (d > band)
      res.push_back(c.slope_mean);
    else
      sync.push_back(c.slope_mean);
  }

  RegionSummary out;
  out.band = band;
  out.diagonal = finalize(diag);
  out.resonance = finalize(res);
  out.synchronization = finalize(sync);
  return out;
}

}  // namespace pinkam
