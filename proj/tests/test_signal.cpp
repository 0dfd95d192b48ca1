#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "core/signal.hpp"
#include "core/spectral.hpp"
#include "support/helpers.hpp"

using namespace pinkam;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double integrated_power_below(const Spectrum& spec, double f_max) {
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    if (spec.freqs[k] < f_max) acc += spec.psd[k];
  }
  return acc;
}

double peak_freq(const Spectrum& spec, double f_lo, double f_hi) {
  double best = 0.0, best_p = -1.0;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    if (spec.freqs[k] < f_lo || spec.freqs[k] > f_hi) continue;
    if (spec.psd[k] > best_p) {
      best_p = spec.psd[k];
      best = spec.freqs[k];
    }
  }
  return best;
}

}  // namespace

TEST_CASE("time series invariants are enforced") {
  CHECK_THROWS_AS(TimeSeries({}, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}, 100.0), std::invalid_argument);
  const TimeSeries ts({1.0, 2.0}, 10.0, 0.5);
  CHECK(ts.duration() == doctest::Approx(0.2));
  CHECK(ts.time_at(1) == doctest::Approx(0.6));
}

TEST_CASE("beat pair equals the 2cos*sin closed form") {
  const TimeSeries g = synth_beat_pair(1.0, 100.0, 2.0, 1000.0);
  CHECK(g.samples[0] == 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g.time_at(k);
    const double expected = 2.0 * std::cos(kTwoPi * 1.0 * t) * std::sin(kTwoPi * 100.0 * t);
    CHECK(std::abs(g.samples[k] - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("beat pair rejects bad parameters") {
  CHECK_THROWS_AS(synth_beat_pair(0.0, 100.0, 1.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(synth_beat_pair(-1.0, 100.0, 1.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(synth_beat_pair(1.0, 500.0, 1.0, 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(synth_beat_pair(10.0, 5.0, 1.0, 1000.0), std::invalid_argument);
}

TEST_CASE("raw beat spectrum peaks only at omega +- lambda, squared at 2*lambda") {
  const TimeSeries g = synth_beat_pair(1.0, 100.0, 10.0, 1000.0);
  const Spectrum raw = psd(g, Estimator::periodogram);

  // top two bins are 99 and 101 Hz, everything else far below
  std::vector<std::size_t> idx(raw.freqs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return raw.psd[a] > raw.psd[b]; });
  const double f0 = raw.freqs[idx[0]], f1 = raw.freqs[idx[1]];
  CHECK(std::min(f0, f1) == doctest::Approx(99.0));
  CHECK(std::max(f0, f1) == doctest::Approx(101.0));
  CHECK(raw.psd[idx[2]] < raw.psd[idx[1]] * 1e-6);  // >= 60 dB down

  const TimeSeries sq = demodulate(g, {DemodKind::square});
  const Spectrum sq_spec = psd(sq, Estimator::periodogram);
  CHECK(peak_freq(sq_spec, 0.0, 50.0) == doctest::Approx(2.0));
}

TEST_CASE("accumulated synthesis: degenerate cases and determinism") {
  AccumulationSpec one;
  one.count = 1;
  one.scale = 0.0;
  const TimeSeries pure = synth_accumulated(one, 1.0, 1000.0);
  for (std::size_t k = 0; k < pure.size(); ++k) {
    CHECK(pure.samples[k] ==
          doctest::Approx(std::sin(kTwoPi * 100.0 * pure.time_at(k))).epsilon(1e-12));
  }

  AccumulationSpec spec;
  spec.count = 50;
  spec.seed = 42;
  const TimeSeries a = synth_accumulated(spec, 1.0, 1000.0);
  const TimeSeries b = synth_accumulated(spec, 1.0, 1000.0);
  CHECK(a.samples == b.samples);

  AccumulationSpec hot = spec;
  hot.base_freq = 600.0;  // above Nyquist for rate 1000
  CHECK_THROWS_AS(synth_accumulated(hot, 1.0, 1000.0), std::invalid_argument);
}

TEST_CASE("exponential frequency sampling is log-uniform in the offset") {
  AccumulationSpec spec;
  spec.count = 100000;
  spec.seed = 7;
  const auto freqs = sample_exponential_frequencies(spec);
  REQUIRE(freqs.size() == 100000);

  // xi_max -> 0 pushes every frequency to base*(1+scale)
  AccumulationSpec tight = spec;
  tight.count = 16;
  tight.xi_max = 1e-15;
  for (double f : sample_exponential_frequencies(tight)) {
    CHECK(f == doctest::Approx(100.0 * 1.01).epsilon(1e-12));
  }

  // offsets delta = f - base have density ~ 1/delta: equal counts in log bins
  const int n_bins = 20;
  std::vector<int> counts(n_bins, 0);
  for (double f : freqs) {
    const double delta = f - spec.base_freq;
    const double xi = -std::log(delta / (spec.base_freq * spec.scale));  // in [0, xi_max)
    const int bin = std::min(n_bins - 1, static_cast<int>(xi / spec.xi_max * n_bins));
    counts[bin]++;
  }
  const double expected = 100000.0 / n_bins;
  const double sigma = std::sqrt(expected);
  for (int c : counts) {
    CHECK(std::abs(c - expected) < 3.0 * sigma);
  }
}

TEST_CASE("demodulation transforms") {
  const TimeSeries fix({2.0, -1.0, 0.5, -0.5, 1.0, 3.0}, 10.0);
  const double mu = (2.0 + 1.0 + 0.5 + 0.5 + 1.0 + 3.0) / 6.0;  // 4/3

  SUBCASE("identity is the identity map") {
    const TimeSeries out = demodulate(fix, {DemodKind::identity});
    CHECK(out.samples == fix.samples);
    CHECK(out.rate == fix.rate);
  }
  SUBCASE("square of a constant is the constant squared") {
    const TimeSeries c({3.0, 3.0, 3.0}, 10.0);
    for (double v : demodulate(c, {DemodKind::square}).samples) CHECK(v == doctest::Approx(9.0));
  }
  SUBCASE("abs and rectifications") {
    CHECK(demodulate(fix, {DemodKind::abs_value}).samples ==
          std::vector<double>{2.0, 1.0, 0.5, 0.5, 1.0, 3.0});
    CHECK(demodulate(fix, {DemodKind::rect_pos}).samples ==
          std::vector<double>{2.0, 0.0, 0.5, 0.0, 1.0, 3.0});
    CHECK(demodulate(fix, {DemodKind::rect_neg}).samples ==
          std::vector<double>{0.0, -1.0, 0.0, -0.5, 0.0, 0.0});
  }
  SUBCASE("thresholding keeps samples above the abs-mean") {
    CHECK(demodulate(fix, {DemodKind::thresh_above_mean}).samples ==
          std::vector<double>{2.0, 0.0, 0.0, 0.0, 0.0, 3.0});
    CHECK(demodulate(fix, {DemodKind::timing}).samples ==
          std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  }
  SUBCASE("anti-thresholding keeps positives below the mean; literal variant keeps negatives") {
    CHECK(demodulate(fix, {DemodKind::anti_thresh_below_mean}).samples ==
          std::vector<double>{0.0, 0.0, 0.5, 0.0, 1.0, 0.0});
    DemodMethod literal{DemodKind::anti_thresh_below_mean};
    literal.literal_anti = true;
    CHECK(demodulate(fix, literal).samples == std::vector<double>{0.0, -1.0, 0.5, -0.5, 1.0, 0.0});
    CHECK(mu == doctest::Approx(4.0 / 3.0));
  }
  SUBCASE("timing is binary and masks thresh_above_mean") {
    const auto timing = demodulate(fix, {DemodKind::timing}).samples;
    const auto thresh = demodulate(fix, {DemodKind::thresh_above_mean}).samples;
    for (std::size_t k = 0; k < timing.size(); ++k) {
      CHECK((timing[k] == 0.0 || timing[k] == 1.0));
      if (timing[k] == 0.0) CHECK(thresh[k] == 0.0);
    }
  }
}

TEST_CASE("cubed sine matches the trig expansion") {
  std::vector<double> s(1000);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sin(kTwoPi * (k / 1000.0));
  const TimeSeries sine(std::move(s), 1000.0);
  DemodMethod cube{DemodKind::nth_power};
  cube.power = 3;
  const TimeSeries out = demodulate(sine, cube);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = k / 1000.0;
    const double expected = (3.0 * std::sin(kTwoPi * t) - std::sin(3.0 * kTwoPi * t)) / 4.0;
    CHECK(std::abs(out.samples[k] - expected) < 1e-12);
  }
}

TEST_CASE("block energy") {
  SUBCASE("rate maps 44100 -> 441 with blocks of 100") {
    const TimeSeries ts(std::vector<double>(44100, 1.0), 44100.0);
    DemodMethod be{DemodKind::block_energy};
    be.block_len = 100;
    const TimeSeries env = demodulate(ts, be);
    CHECK(env.rate == doctest::Approx(441.0));
    CHECK(env.size() == 441);
  }
  SUBCASE("conserves energy when blocks divide the length") {
    const TimeSeries noise = testutil::white_noise(1000, 100.0, 5);
    DemodMethod be{DemodKind::block_energy};
    be.block_len = 10;
    const TimeSeries env = demodulate(noise, be);
    double sum_sq = 0.0;
    for (double v : noise.samples) sum_sq += v * v;
    double sum_env = 0.0;
    for (double v : env.samples) sum_env += v;
    CHECK(sum_env == doctest::Approx(sum_sq).epsilon(1e-12));
  }
  SUBCASE("drops the trailing partial block") {
    const TimeSeries ts(std::vector<double>(25, 1.0), 10.0);
    DemodMethod be{DemodKind::block_energy};
    be.block_len = 10;
    CHECK(demodulate(ts, be).size() == 2);
  }
  SUBCASE("rejects blocks longer than the series") {
    const TimeSeries ts(std::vector<double>(5, 1.0), 10.0);
    DemodMethod be{DemodKind::block_energy};
    be.block_len = 10;
    CHECK_THROWS_AS(demodulate(ts, be), std::invalid_argument);
  }
}

TEST_CASE("demod kind names round-trip") {
  for (auto kind : {DemodKind::identity, DemodKind::square, DemodKind::nth_power, DemodKind::abs_value,
                    DemodKind::rect_pos, DemodKind::rect_neg, DemodKind::thresh_above_mean,
                    DemodKind::anti_thresh_below_mean, DemodKind::timing, DemodKind::block_energy}) {
    CHECK(demod_kind_from_name(demod_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(demod_kind_from_name("sideband"), std::invalid_argument);
}

TEST_CASE("delayed superposition") {
  std::vector<double> s(2000);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sin(kTwoPi * 10.0 * (k / 1000.0));
  const TimeSeries sine(std::move(s), 1000.0);

  SUBCASE("full-period delay doubles the signal on the overlap") {
    const TimeSeries out = delayed_superposition(sine, 0.1);  // one period of 10 Hz
    CHECK(out.size() == sine.size() - 100);
    for (std::size_t k = 0; k < out.size(); ++k) {
      CHECK(out.samples[k] == doctest::Approx(2.0 * sine.samples[k + 100]).epsilon(1e-9));
    }
  }
  SUBCASE("half-period delay cancels") {
    const TimeSeries out = delayed_superposition(sine, 0.05);
    for (double v : out.samples) CHECK(std::abs(v) < 1e-9);
  }
  SUBCASE("rejects bad delays") {
    CHECK_THROWS_AS(delayed_superposition(sine, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(delayed_superposition(sine, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(delayed_superposition(sine, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(delayed_superposition(sine, 1e-6), std::invalid_argument);  // rounds to 0 samples
  }
}

TEST_CASE("even powers expose the baseband, odd powers do not") {
  // band-limited envelope on a carrier: below omega/4 the even powers carry
  // the envelope power, the odd powers only leakage
  const TimeSeries g = synth_beat_pair(1.0, 100.0, 20.0, 1000.0);
  auto low_power = [&](int n) {
    DemodMethod m{DemodKind::nth_power};
    m.power = n;
    const TimeSeries d = demodulate(g, m);
    return integrated_power_below(psd(d, Estimator::periodogram), 25.0);  // omega/4
  };
  const double p1 = low_power(1), p2 = low_power(2), p3 = low_power(3), p4 = low_power(4);
  CHECK(p2 / p1 > 100.0);  // >= 20 dB
  CHECK(p2 / p3 > 100.0);
  CHECK(p4 / p3 > 100.0);
}
