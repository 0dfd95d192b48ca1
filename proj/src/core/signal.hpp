#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinkam {

/// Uniformly sampled real-valued signal. Sample k sits at origin + k/rate.
struct TimeSeries {
  std::vector<double> samples;
  double rate = 1.0;    // Hz
  double origin = 0.0;  // s

  TimeSeries() = default;
  TimeSeries(std::vector<double> s, double rate_hz, double origin_s = 0.0);

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / rate; }
  double time_at(std::size_t k) const { return origin + static_cast<double>(k) / rate; }
};

enum class DemodKind {
  identity,
  square,
  nth_power,
  abs_value,
  rect_pos,
  rect_neg,
  thresh_above_mean,
  anti_thresh_below_mean,
  timing,
  block_energy,
};

/// Envelope-extraction transform applied before spectral analysis.
/// Thresholding methods compare against mu, the mean of |x| over the series.
struct DemodMethod {
  DemodKind kind = DemodKind::square;
  int power = 2;       // nth_power only
  int block_len = 100; // block_energy only
  // anti_thresh_below_mean keeps samples with 0 <= x < mu. The literal variant
  // keeps x wherever x < mu, negative samples included.
  bool literal_anti = false;
};

const char* demod_kind_name(DemodKind k);
DemodKind demod_kind_from_name(const std::string& name);

/// Superposition of count sines at base_freq*(1 + scale*exp(-xi_i)), with
/// xi_i drawn uniformly from [0, xi_max]. The frequency offsets then crowd
/// toward base_freq with density inversely proportional to the offset.
struct AccumulationSpec {
  double base_freq = 100.0;  // Hz
  double scale = 0.01;
  int count = 1000;
  double xi_max = 10.0;
  std::uint64_t seed = 1;
};

/// sin(2pi(omega+lambda)t) + sin(2pi(omega-lambda)t), the elementary beat pair.
TimeSeries synth_beat_pair(double lambda_hz, double omega_hz, double duration_s, double rate_hz);

/// The component frequencies a spec draws, in draw order (not sorted).
std::vector<double> sample_exponential_frequencies(const AccumulationSpec& spec);

TimeSeries synth_accumulated(const AccumulationSpec& spec, double duration_s, double rate_hz);

TimeSeries demodulate(const TimeSeries& ts, const DemodMethod& method);

/// x(t) + x(t - tau), tau rounded to whole samples; the output drops the
/// leading samples with no delayed partner.
TimeSeries delayed_superposition(const TimeSeries& ts, double tau_s);

}  // namespace pinkam
