#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "core/fft.hpp"

namespace pinkam {

namespace {

constexpr std::size_t kMinPsdSamples = 16;

// Two-sided |X_k|^2 folded onto positive frequencies. With the 1/(rate*n)
// weight the sum over bins times df recovers the signal variance exactly.
void periodogram_into(const std::vector<double>& x, double rate, Taper taper,
                      std::vector<double>& acc) {
  const std::size_t n = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);

  std::vector<double> detrended(n);
  double wss = 0.0;
  if (taper == Taper::hann) {
    for (std::size_t k = 0; k < n; ++k) {
      const double w =
          0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
      detrended[k] = (x[k] - mean) * w;
      wss += w * w;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) detrended[k] = x[k] - mean;
    wss = static_cast<double>(n);
  }

  const auto spec = dft_real(detrended);
  const double norm = 1.0 / (rate * wss);
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k <= half; ++k) {
    double p = std::norm(spec[k]) * norm;
    if (2 * k != n) p += std::norm(spec[n - k]) * norm;  // fold the mirror bin
    acc[k - 1] += p;
  }
}

}  // namespace

Spectrum psd(const TimeSeries& ts, Estimator est, int n_segments, Taper taper) {
  if (est == Estimator::periodogram) n_segments = 1;
  if (n_segments < 1) throw std::invalid_argument("spectral: n_segments must be >= 1");

  const std::size_t seg_len = ts.size() / static_cast<std::size_t>(n_segments);
  if (seg_len < kMinPsdSamples)
    throw std::invalid_argument("spectral: need at least 16 samples per segment");

  const std::size_t half = seg_len / 2;
  std::vector<double> acc(half, 0.0);
  std::vector<double> buf(seg_len);
  for (int s = 0; s < n_segments; ++s) {
    const std::size_t off = static_cast<std::size_t>(s) * seg_len;
    std::copy_n(ts.samples.begin() + static_cast<std::ptrdiff_t>(off), seg_len, buf.begin());
    periodogram_into(buf, ts.rate, taper, acc);
  }

  Spectrum out;
  out.freqs.resize(half);
  out.psd.resize(half);
  const double df = ts.rate / static_cast<double>(seg_len);
  for (std::size_t k = 0; k < half; ++k) {
    out.freqs[k] = df * static_cast<double>(k + 1);
    out.psd[k] = acc[k] / static_cast<double>(n_segments);
  }
  out.source_len = ts.size();
  out.source_rate = ts.rate;
  out.estimator = est == Estimator::periodogram
                      ? "periodogram"
                      : "segment_average(" + std::to_string(n_segments) + ")";
  if (taper == Taper::hann) out.estimator += "+hann";
  return out;
}

Spectrum log_bin(const Spectrum& spec, int bins_per_decade) {
  if (bins_per_decade < 1) throw std::invalid_argument("spectral: bins_per_decade must be >= 1");
  if (spec.freqs.empty()) throw std::invalid_argument("spectral: empty spectrum");

  Spectrum out;
  out.source_len = spec.source_len;
  out.source_rate = spec.source_rate;
  out.estimator = spec.estimator + "+logbin(" + std::to_string(bins_per_decade) + ")";

  const double f0 = spec.freqs.front();
  const double step = 1.0 / static_cast<double>(bins_per_decade);
  std::size_t i = 0;
  int bin = 0;
  while (i < spec.freqs.size()) {
    const double edge_hi = f0 * std::pow(10.0, step * static_cast<double>(bin + 1));
    double sum_log_f = 0.0, sum_p = 0.0;
    std::size_t count = 0;
    while (i < spec.freqs.size() && spec.freqs[i] < edge_hi) {
      sum_log_f += std::log(spec.freqs[i]);
      sum_p += spec.psd[i];
      ++count;
      ++i;
    }
    if (count > 0) {
      out.freqs.push_back(std::exp(sum_log_f / static_cast<double>(count)));
      out.psd.push_back(sum_p / static_cast<double>(count));
    }
    ++bin;
  }
  return out;
}

PowerLawFit fit_power_law(const Spectrum& spec, double f_lo, double f_hi) {
  if (!(f_lo < f_hi)) throw std::invalid_argument("spectral: fit needs f_lo < f_hi");

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    const double f = spec.freqs[k];
    if (f < f_lo || f > f_hi) continue;
    if (spec.psd[k] <= 0.0) continue;  // silent bin, nothing to fit in log space
    lx.push_back(std::log10(f));
    ly.push_back(std::log10(spec.psd[k]));
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw std::invalid_argument("spectral: power-law fit needs at least 3 points in range, got " +
                                std::to_string(n));

  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = lx[k] - mx;
    const double dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("spectral: degenerate fit range");

  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.f_lo = f_lo;
  fit.f_hi = f_hi;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.n_bins = static_cast<int>(n);
  return fit;
}

NoiseClass classify_slope(double slope) {
  if (!std::isfinite(slope)) throw std::invalid_argument("spectral: classify needs a finite slope");
  if (slope >= -1.2 && slope <= -0.8) return NoiseClass::pink;
  if (slope > -0.5 && slope < 0.5) return NoiseClass::white;
  if (slope <= -1.5) return NoiseClass::brown;
  return NoiseClass::other;
}

const char* noise_class_name(NoiseClass c) {
  switch (c) {
    case NoiseClass::pink: return "pink";
    case NoiseClass::white: return "white";
    case NoiseClass::brown: return "brown";
    case NoiseClass::other: return "other";
  }
  return "other";
}

SlopeTimeline sliding_slopes(const TimeSeries& ts, double window_s, double hop_s,
                             const DemodMethod& demod, double f_lo, double f_hi,
                             int bins_per_decade) {
  if (hop_s <= 0.0) throw std::invalid_argument("spectral: hop must be positive");
  if (window_s <= 0.0 || window_s > ts.duration())
    throw std::invalid_argument("spectral: window must fit inside the series");
  if (window_s < 10.0 / f_lo)
    throw std::invalid_argument("spectral: window too short to resolve f_lo, need at least 10/f_lo");

  const auto win = static_cast<std::size_t>(std::llround(window_s * ts.rate));
  const auto hop = static_cast<std::size_t>(std::llround(hop_s * ts.rate));
  if (win < kMinPsdSamples) throw std::invalid_argument("spectral: window too short");
  if (hop < 1) throw std::invalid_argument("spectral: hop shorter than one sample");

  SlopeTimeline tl;
  tl.window = window_s;
  tl.hop = hop_s;
  for (std::size_t start = 0; start + win <= ts.size(); start += hop) {
    std::vector<double> chunk(ts.samples.begin() + static_cast<std::ptrdiff_t>(start),
                              ts.samples.begin() + static_cast<std::ptrdiff_t>(start + win));
    TimeSeries piece(std::move(chunk), ts.rate, ts.time_at(start));
    const TimeSeries env = demodulate(piece, demod);
    const Spectrum binned = log_bin(psd(env, Estimator::periodogram), bins_per_decade);
    const PowerLawFit fit = fit_power_law(binned, f_lo, f_hi);
    tl.times.push_back(ts.time_at(start) + window_s / 2.0);
    tl.slopes.push_back(fit.slope);
  }
  return tl;
}

}  // namespace pinkam
