#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace svg {

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;  // log10 value at 1 Hz
  double f_lo = 0.0;
  double f_hi = 0.0;
  double r2 = 0.0;
};

/// Log-log scatter of (freq, psd) with the fitted power law overlaid.
void write_loglog_spectrum(const std::string& path, const double* freqs, const double* psd,
                           std::size_t count, const FitLine& fit, const std::string& title);

/// Slope-index timeline with a guide line at -1.
void write_timeline(const std::string& path, const double* times, const double* slopes,
                    std::size_t count, const std::string& title);

struct HeatCell {
  double slope = 0.0;
  int noise_class = 3;  // pinkam_noise_class; 3 = other
  bool ok = false;
};

/// (N, K) grid colored by noise class, slope values printed per cell.
void write_heatmap(const std::string& path, const std::vector<int>& n_values,
                   const std::vector<double>& k_values, const std::vector<HeatCell>& cells,
                   const std::string& title);

}  // namespace svg
