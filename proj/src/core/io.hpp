#pragma once

#include <string>

#include "core/resonance.hpp"
#include "core/signal.hpp"
#include "core/spectral.hpp"
#include "core/sweep.hpp"

namespace pinkam {

// CSV columns use shortest-round-trip decimal floats, so write/read cycles
// reproduce the exact binary values.

void write_series_csv(const TimeSeries& ts, const std::string& path);
TimeSeries read_series_csv(const std::string& path);

void write_trajectory_csv(const Trajectory& traj, const std::string& path, bool include_psi);

void write_spectrum_csv(const Spectrum& spec, const std::string& path);
void write_timeline_csv(const SlopeTimeline& tl, const std::string& path);
void write_modes_csv(const ModeSet& modes, const std::string& path);
void write_slopemap_csv(const SlopeMap& map, const std::string& path);

enum class ChannelPolicy { mix_mean, left, right };

enum class WavEncoding { pcm16, float32 };

struct WavInfo {
  int channels = 0;
  int bits_per_sample = 0;
  bool is_float = false;
};

/// Decodes 16/24-bit PCM or 32-bit float WAV; stereo is reduced per policy
/// and amplitudes land in [-1, 1].
TimeSeries read_wav(const std::string& path, ChannelPolicy policy, WavInfo* info = nullptr);

void write_wav(const TimeSeries& ts, const std::string& path, WavEncoding enc = WavEncoding::pcm16);

std::string format_double(double v);

}  // namespace pinkam
