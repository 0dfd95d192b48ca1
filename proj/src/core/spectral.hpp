#pragma once

#include <string>
#include <vector>

#include "core/signal.hpp"

namespace pinkam {

/// One-sided power spectral density, DC bin excluded. The normalization is
/// chosen so that sum(psd)*df equals the variance of the analyzed signal.
struct Spectrum {
  std::vector<double> freqs;  // Hz, strictly ascending, all > 0
  std::vector<double> psd;    // power / Hz, >= 0
  std::size_t source_len = 0;
  double source_rate = 0.0;
  std::string estimator;
};

enum class Estimator { periodogram, segment_average };
enum class Taper { rect, hann };

Spectrum psd(const TimeSeries& ts, Estimator est, int n_segments = 1, Taper taper = Taper::rect);

/// Averages PSD points into geometrically spaced bins anchored at the lowest
/// frequency. Each output point is (geometric mean f, arithmetic mean psd);
/// empty bins are omitted.
Spectrum log_bin(const Spectrum& spec, int bins_per_decade);

struct PowerLawFit {
  double slope = 0.0;      // fitted index of psd ~ f^slope
  double intercept = 0.0;  // log10 psd at 1 Hz
  double f_lo = 0.0;
  double f_hi = 0.0;
  double r2 = 0.0;
  int n_bins = 0;
};

/// Ordinary least squares of log10(psd) against log10(f) over [f_lo, f_hi].
PowerLawFit fit_power_law(const Spectrum& spec, double f_lo, double f_hi);

enum class NoiseClass { pink, white, brown, other };

NoiseClass classify_slope(double slope);
const char* noise_class_name(NoiseClass c);

struct SlopeTimeline {
  std::vector<double> times;   // window-center seconds
  std::vector<double> slopes;  // fitted indices
  double window = 0.0;         // s
  double hop = 0.0;            // s
};

/// Per-window demodulate -> psd -> log_bin -> fit over a sliding window.
SlopeTimeline sliding_slopes(const TimeSeries& ts, double window_s, double hop_s,
                             const DemodMethod& demod, double f_lo, double f_hi,
                             int bins_per_decade = 10);

}  // namespace pinkam
