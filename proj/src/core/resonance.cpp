#include "core/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/fft.hpp"

namespace pinkam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const RoomGeometry& geom) {
  if (geom.l1 <= 0.0 || geom.l2 <= 0.0 || geom.l3 <= 0.0)
    throw std::invalid_argument("resonance: room dimensions must be positive");
  if (geom.sound_speed <= 0.0) throw std::invalid_argument("resonance: sound speed must be positive");
}

double mode_freq(const RoomGeometry& g, int n1, int n2, int n3) {
  const double a = n1 / g.l1;
  const double b = n2 / g.l2;
  const double c = n3 / g.l3;
  return 0.5 * g.sound_speed * std::sqrt(a * a + b * b + c * c);
}

}  // namespace

ModeSet room_eigenfrequencies(const RoomGeometry& geom, int count, int index_start) {
  validate(geom);
  if (count < 1) throw std::invalid_argument("resonance: mode count must be >= 1");
  if (index_start != 0 && index_start != 1)
    throw std::invalid_argument("resonance: index_start must be 0 or 1");

  const double l_max = std::max({geom.l1, geom.l2, geom.l3});

  // Grow the index cube until at least `count` modes fall at or below the
  // axial frequency of the cube edge along the longest dimension; every mode
  // outside the cube is above that cutoff, so the lowest `count` are complete.
  for (int bound = 8;; bound *= 2) {
    const double f_cut = 0.5 * geom.sound_speed * static_cast<double>(bound) / l_max;
    std::vector<Mode> inside;
    for (int n1 = index_start; n1 <= bound; ++n1) {
      for (int n2 = index_start; n2 <= bound; ++n2) {
        for (int n3 = index_start; n3 <= bound; ++n3) {
          if (n1 == 0 && n2 == 0 && n3 == 0) continue;
          const double f = mode_freq(geom, n1, n2, n3);
          if (f <= f_cut) inside.push_back({n1, n2, n3, f});
        }
      }
    }
    if (inside.size() >= static_cast<std::size_t>(count)) {
      std::sort(inside.begin(), inside.end(), [](const Mode& a, const Mode& b) {
        if (a.freq != b.freq) return a.freq < b.freq;
        if (a.n1 != b.n1) return a.n1 < b.n1;
        if (a.n2 != b.n2) return a.n2 < b.n2;
        return a.n3 < b.n3;
      });
      inside.resize(static_cast<std::size_t>(count));
      return ModeSet{std::move(inside)};
    }
  }
}

TimeSeries synth_modes(const ModeSet& modes, double duration_s, double rate_hz) {
  if (modes.modes.empty()) throw std::invalid_argument("resonance: empty mode set");
  if (duration_s <= 0.0) throw std::invalid_argument("resonance: duration must be positive");
  if (rate_hz <= 0.0) throw std::invalid_argument("resonance: rate must be positive");
  for (const Mode& m : modes.modes) {
    if (m.freq >= rate_hz / 2.0)
      throw std::invalid_argument("resonance: mode at or above Nyquist, raise the rate");
  }

  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  if (n < 1) throw std::invalid_argument("resonance: duration shorter than one sample");
  std::vector<double> s(n, 0.0);
  for (const Mode& m : modes.modes) {
    const double w = kTwoPi * m.freq;
    for (std::size_t k = 0; k < n; ++k) s[k] += std::sin(w * (static_cast<double>(k) / rate_hz));
  }
  return TimeSeries(std::move(s), rate_hz);
}

TimeSeries add_reverberation(const TimeSeries& ts, const RoomGeometry& geom, const ReverbConfig& rc) {
  validate(geom);
  if (rc.reflections < 0) throw std::invalid_argument("resonance: reflection count must be >= 0");
  if (rc.alpha < 0.0) throw std::invalid_argument("resonance: alpha must be >= 0");

  const double lengths[3] = {geom.l1, geom.l2, geom.l3};
  const double max_delay = rc.reflections * std::max({geom.l1, geom.l2, geom.l3}) / geom.sound_speed;
  if (max_delay >= ts.duration())
    throw std::invalid_argument("resonance: reflection delay exceeds the series duration");

  std::vector<double> out(ts.size(), 0.0);
  for (double l : lengths) {
    for (int k = 1; k <= rc.reflections; ++k) {
      const double gain = std::pow(1.0 + k, -rc.alpha);
      const auto delay = static_cast<std::size_t>(std::llround(k * l / geom.sound_speed * ts.rate));
      for (std::size_t j = delay; j < out.size(); ++j) {
        out[j] += gain * ts.samples[j - delay];
      }
    }
  }
  return TimeSeries(std::move(out), ts.rate, ts.origin);
}

double lorentzian_gain(double f, double f0, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("resonance: gamma must be positive");
  const double d = f - f0;
  const double hw = gamma / 2.0;
  return 1.0 / (d * d + hw * hw);
}

TimeSeries apply_lorentzian(const TimeSeries& ts, double f0, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("resonance: gamma must be positive");

  auto spec = dft_real(ts.samples);
  const std::size_t n = spec.size();
  for (std::size_t k = 0; k < n; ++k) {
    // Map bin k to its signed frequency, gain depends on |f| only.
    const double f = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) *
                     ts.rate / static_cast<double>(n);
    spec[k] *= std::sqrt(lorentzian_gain(std::abs(f), f0, gamma));
  }
  spec = idft(std::move(spec));

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = spec[k].real();
  return TimeSeries(std::move(out), ts.rate, ts.origin);
}

}  // namespace pinkam
