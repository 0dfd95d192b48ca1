#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "core/fft.hpp"
#include "core/rng.hpp"
#include "core/signal.hpp"
#include "core/spectral.hpp"

namespace testutil {

// Reference O(n^2) transform; the oracle the fast path is checked against.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(j) /
                           static_cast<double>(n);
      acc += x[j] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

inline double gaussian(std::mt19937_64& rng) {
  // Box-Muller on the portable uniform helper.
  const double u1 = std::max(pinkam::uniform01(rng), 1e-300);
  const double u2 = pinkam::uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline pinkam::TimeSeries white_noise(std::size_t n, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> s(n);
  for (auto& v : s) v = gaussian(rng);
  return pinkam::TimeSeries(std::move(s), rate);
}

inline pinkam::TimeSeries brownian(std::size_t n, double rate, std::uint64_t seed) {
  pinkam::TimeSeries w = white_noise(n, rate, seed);
  double acc = 0.0;
  for (auto& v : w.samples) {
    acc += v;
    v = acc;
  }
  return w;
}

// Gaussian noise with exact E[PSD] ~ f^{-beta}, built in the frequency domain
// (Hermitian spectrum, inverse transform). Known-slope fixture for the
// fit pipeline.
inline pinkam::TimeSeries shaped_noise(double beta, std::size_t n, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::complex<double>> spec(n, 0.0);
  const double df = rate / static_cast<double>(n);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = df * static_cast<double>(k);
    const double mag = std::pow(f, -beta / 2.0);
    const std::complex<double> z(gaussian(rng), gaussian(rng));
    spec[k] = mag * z / std::sqrt(2.0);
    if (2 * k != n) spec[n - k] = std::conj(spec[k]);
  }
  if (n % 2 == 0) spec[n / 2] = std::abs(spec[n / 2]);  // Nyquist bin must be real
  auto x = pinkam::idft(std::move(spec));
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = x[j].real();
  return pinkam::TimeSeries(std::move(s), rate);
}

inline pinkam::PowerLawFit fitted_slope(const pinkam::TimeSeries& ts, double f_lo, double f_hi,
                                        int bins_per_decade = 10,
                                        pinkam::Estimator est = pinkam::Estimator::periodogram,
                                        int n_segments = 1) {
  const auto binned = pinkam::log_bin(pinkam::psd(ts, est, n_segments), bins_per_decade);
  return pinkam::fit_power_law(binned, f_lo, f_hi);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto rank = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t p = 0; p < idx.size();) {
      std::size_t q = p;
      while (q + 1 < idx.size() && v[idx[q + 1]] == v[idx[p]]) ++q;
      const double avg = 0.5 * static_cast<double>(p + q) + 1.0;
      for (std::size_t m = p; m <= q; ++m) r[idx[m]] = avg;
      p = q + 1;
    }
    return r;
  };
  const auto ra = rank(a);
  const auto rb = rank(b);
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sxy += (ra[i] - ma) * (rb[i] - mb);
    sxx += (ra[i] - ma) * (ra[i] - ma);
    syy += (rb[i] - mb) * (rb[i] - mb);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace testutil
