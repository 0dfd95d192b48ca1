#pragma once

#include <vector>

#include "core/signal.hpp"

namespace pinkam {

struct RoomGeometry {
  double l1 = 1.0;  // m
  double l2 = 1.0;
  double l3 = 1.0;
  double sound_speed = 343.0;  // m/s

  // Grosser Musikvereinssaal, Vienna: 48.8 x 19.2 x 17.75 m.
  static RoomGeometry musikverein() { return {48.8, 19.2, 17.75, 343.0}; }
};

struct Mode {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  double freq = 0.0;  // Hz
};

struct ModeSet {
  std::vector<Mode> modes;  // ascending by frequency
};

/// Lowest `count` standing-wave frequencies of the rectangular cavity,
/// f = (v/2) sqrt((n1/L1)^2 + (n2/L2)^2 + (n3/L3)^2), indices starting at
/// index_start (0 admits axial and tangential modes; the all-zero triple is
/// always excluded).
ModeSet room_eigenfrequencies(const RoomGeometry& geom, int count, int index_start);

/// Equal-amplitude superposition sum(sin(2 pi f t)) over the mode set.
TimeSeries synth_modes(const ModeSet& modes, double duration_s, double rate_hz);

struct ReverbConfig {
  int reflections = 20;  // M, per axis
  double alpha = 0.1;    // power reduction exponent per reflection
};

/// Reflection sum over the three axes: sum_m sum_k (1+k)^-alpha x(t - k L_m/v),
/// delays rounded to whole samples, source zero-padded before t=0.
TimeSeries add_reverberation(const TimeSeries& ts, const RoomGeometry& geom, const ReverbConfig& rc);

/// Resonant response 1/((f-f0)^2 + (gamma/2)^2).
double lorentzian_gain(double f, double f0, double gamma);

/// Zero-phase filter scaling each frequency component by sqrt(H(|f|)).
TimeSeries apply_lorentzian(const TimeSeries& ts, double f0, double gamma);

}  // namespace pinkam
