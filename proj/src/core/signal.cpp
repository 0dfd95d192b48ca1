#include "core/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/rng.hpp"

namespace pinkam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("signal: non-finite sample in ") + what);
  }
}

std::size_t sample_count(double duration_s, double rate_hz) {
  if (duration_s <= 0.0) throw std::invalid_argument("signal: duration must be positive");
  if (rate_hz <= 0.0) throw std::invalid_argument("signal: rate must be positive");
  const auto n = static_cast<long long>(std::llround(duration_s * rate_hz));
  if (n < 1) throw std::invalid_argument("signal: duration shorter than one sample");
  return static_cast<std::size_t>(n);
}

double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

double abs_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s / static_cast<double>(v.size());
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> s, double rate_hz, double origin_s)
    : samples(std::move(s)), rate(rate_hz), origin(origin_s) {
  if (rate <= 0.0) throw std::invalid_argument("signal: rate must be positive");
  if (samples.empty()) throw std::invalid_argument("signal: series must hold at least one sample");
  check_finite(samples, "series");
}

const char* demod_kind_name(DemodKind k) {
  switch (k) {
    case DemodKind::identity: return "identity";
    case DemodKind::square: return "square";
    case DemodKind::nth_power: return "nth_power";
    case DemodKind::abs_value: return "abs";
    case DemodKind::rect_pos: return "rect_pos";
    case DemodKind::rect_neg: return "rect_neg";
    case DemodKind::thresh_above_mean: return "thresh_above_mean";
    case DemodKind::anti_thresh_below_mean: return "anti_thresh_below_mean";
    case DemodKind::timing: return "timing";
    case DemodKind::block_energy: return "block_energy";
  }
  return "unknown";
}

DemodKind demod_kind_from_name(const std::string& name) {
  static const std::pair<const char*, DemodKind> table[] = {
      {"identity", DemodKind::identity},
      {"square", DemodKind::square},
      {"nth_power", DemodKind::nth_power},
      {"abs", DemodKind::abs_value},
      {"rect_pos", DemodKind::rect_pos},
      {"rect_neg", DemodKind::rect_neg},
      {"thresh_above_mean", DemodKind::thresh_above_mean},
      {"anti_thresh_below_mean", DemodKind::anti_thresh_below_mean},
      {"timing", DemodKind::timing},
      {"block_energy", DemodKind::block_energy},
  };
  for (const auto& [n, k] : table) {
    if (name == n) return k;
  }
  throw std::invalid_argument("signal: unknown demodulation method '" + name + "'");
}

TimeSeries synth_beat_pair(double lambda_hz, double omega_hz, double duration_s, double rate_hz) {
  if (lambda_hz <= 0.0) throw std::invalid_argument("signal: beat lambda must be positive");
  if (omega_hz <= lambda_hz) throw std::invalid_argument("signal: carrier omega must exceed lambda");
  if (omega_hz + lambda_hz >= rate_hz / 2.0)
    throw std::invalid_argument("signal: omega+lambda at or above Nyquist, raise the rate");

  const std::size_t n = sample_count(duration_s, rate_hz);
  std::vector<double> s(n);
  const double f_hi = kTwoPi * (omega_hz + lambda_hz);
  const double f_lo = kTwoPi * (omega_hz - lambda_hz);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate_hz;
    s[k] = std::sin(f_hi * t) + std::sin(f_lo * t);
  }
  return TimeSeries(std::move(s), rate_hz);
}

std::vector<double> sample_exponential_frequencies(const AccumulationSpec& spec) {
  if (spec.base_freq <= 0.0) throw std::invalid_argument("signal: base_freq must be positive");
  if (spec.count < 1) throw std::invalid_argument("signal: count must be at least 1");
  if (spec.xi_max <= 0.0) throw std::invalid_argument("signal: xi_max must be positive");

  std::mt19937_64 rng(spec.seed);
  std::vector<double> freqs(static_cast<std::size_t>(spec.count));
  for (auto& f : freqs) {
    const double xi = uniform(rng, 0.0, spec.xi_max);
    f = spec.base_freq * (1.0 + spec.scale * std::exp(-xi));
  }
  return freqs;
}

TimeSeries synth_accumulated(const AccumulationSpec& spec, double duration_s, double rate_hz) {
  const std::vector<double> freqs = sample_exponential_frequencies(spec);
  for (double f : freqs) {
    if (f <= 0.0) throw std::invalid_argument("signal: accumulated component frequency not positive");
    if (f >= rate_hz / 2.0)
      throw std::invalid_argument("signal: accumulated component at or above Nyquist, raise the rate");
  }

  const std::size_t n = sample_count(duration_s, rate_hz);
  std::vector<double> s(n, 0.0);
  for (double f : freqs) {
    const double w = kTwoPi * f;
    for (std::size_t k = 0; k < n; ++k) {
      s[k] += std::sin(w * (static_cast<double>(k) / rate_hz));
    }
  }
  return TimeSeries(std::move(s), rate_hz);
}

TimeSeries demodulate(const TimeSeries& ts, const DemodMethod& method) {
  const std::vector<double>& x = ts.samples;
  std::vector<double> y;

  switch (method.kind) {
    case DemodKind::identity:
      return ts;
    case DemodKind::square: {
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [](double v) { return v * v; });
      break;
    }
    case DemodKind::nth_power: {
      if (method.power < 1) throw std::invalid_argument("signal: nth_power needs power >= 1");
      // Normalize to unit peak first so high powers stay in range; slope fits
      // are scale-invariant.
      double peak = 0.0;
      for (double v : x) peak = std::max(peak, std::abs(v));
      const double inv = peak > 0.0 ? 1.0 / peak : 1.0;
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [&](double v) {
        return std::pow(v * inv, static_cast<double>(method.power));
      });
      break;
    }
    case DemodKind::abs_value: {
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::abs(v); });
      break;
    }
    case DemodKind::rect_pos: {
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::max(v, 0.0); });
      break;
    }
    case DemodKind::rect_neg: {
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::min(v, 0.0); });
      break;
    }
    case DemodKind::thresh_above_mean: {
      const double mu = abs_mean(x);
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return v * heaviside(v - mu); });
      break;
    }
    case DemodKind::anti_thresh_below_mean: {
      const double mu = abs_mean(x);
      y.resize(x.size());
      if (method.literal_anti) {
        std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return v * heaviside(mu - v); });
      } else {
        std::transform(x.begin(), x.end(), y.begin(),
                       [&](double v) { return (v >= 0.0 && v < mu) ? v : 0.0; });
      }
      break;
    }
    case DemodKind::timing: {
      const double mu = abs_mean(x);
      y.resize(x.size());
      std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return heaviside(v - mu); });
      break;
    }
    case DemodKind::block_energy: {
      if (method.block_len < 1) throw std::invalid_argument("signal: block_energy needs block_len >= 1");
      const auto len = static_cast<std::size_t>(method.block_len);
      if (len > x.size())
        throw std::invalid_argument("signal: block_energy block_len exceeds sample count");
      const std::size_t blocks = x.size() / len;  // trailing partial block dropped
      y.resize(blocks);
      for (std::size_t b = 0; b < blocks; ++b) {
        double e = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
          const double v = x[b * len + k];
          e += v * v;
        }
        y[b] = e;
      }
      return TimeSeries(std::move(y), ts.rate / static_cast<double>(len), ts.origin);
    }
  }
  return TimeSeries(std::move(y), ts.rate, ts.origin);
}

TimeSeries delayed_superposition(const TimeSeries& ts, double tau_s) {
  if (tau_s <= 0.0) throw std::invalid_argument("signal: delay must be positive");
  if (tau_s >= ts.duration()) throw std::invalid_argument("signal: delay must be shorter than the series");
  const auto d = static_cast<std::size_t>(std::llround(tau_s * ts.rate));
  if (d < 1) throw std::invalid_argument("signal: delay rounds to zero samples at this rate");
  if (d >= ts.size()) throw std::invalid_argument("signal: delay leaves no overlap");

  std::vector<double> y(ts.size() - d);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = ts.samples[k + d] + ts.samples[k];
  return TimeSeries(std::move(y), ts.rate, ts.origin + static_cast<double>(d) / ts.rate);
}

}  // namespace pinkam
