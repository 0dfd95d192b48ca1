#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "core/signal.hpp"

namespace pinkam {

enum class Model { first_order, second_order };
enum class ResetMode { shift, reassign };
enum class AngleUnit { radians, turns };

/// Intermittent randomization of oscillator phases. Per-oscillator event gaps
/// are drawn uniformly from [0, max_interval]; the perturbation amount is
/// drawn uniformly from amount range, in radians or turns.
struct ResetPolicy {
  bool enabled = true;
  double max_interval = 0.05;  // s
  ResetMode mode = ResetMode::shift;
  double amount_lo = 0.0;
  double amount_hi = 1.0;
  AngleUnit unit = AngleUnit::radians;
};

struct EnsembleConfig {
  int n = 20;
  double coupling = 20.0;      // K, 1/s
  double freq_center = 100.0;  // Hz
  double freq_spread = 0.01;   // fractional half-width
  std::vector<double> explicit_freqs;  // overrides center/spread when nonempty
  Model model = Model::first_order;
  double dt = 1e-4;          // s
  double duration = 10.0;    // s
  double record_rate = 5000.0;  // Hz
  std::uint64_t seed = 1;
  ResetPolicy reset;
};

struct EnsembleState {
  double t = 0.0;
  std::vector<double> phases;      // rad
  std::vector<double> velocities;  // rad/s, second-order model only
  std::vector<double> natural_freqs;  // Hz, drawn at init
  std::vector<double> next_reset;  // s, per oscillator
  // One stream per oscillator keeps reset realizations independent across
  // oscillators and invariant under dt refinement.
  std::vector<std::mt19937_64> reset_rngs;
};

struct Trajectory {
  TimeSeries x;    // mean-field signal
  TimeSeries r;    // order magnitude
  TimeSeries psi;  // order phase, rad
  EnsembleConfig config;
};

void validate(const EnsembleConfig& config);

EnsembleState init_ensemble(const EnsembleConfig& config);
void step_first_order(EnsembleState& state, const EnsembleConfig& config);
void step_second_order(EnsembleState& state, const EnsembleConfig& config);
void apply_resets(EnsembleState& state, const ResetPolicy& policy);

/// (r, psi) with r*exp(i*psi) the ensemble-average unit phasor; r in [0,1],
/// psi in (-pi, pi].
std::pair<double, double> order_parameter(std::span<const double> phases);

/// (1/N) sum sin(theta_i), the combined output signal.
double mean_field_signal(std::span<const double> phases);

Trajectory simulate(const EnsembleConfig& config);

/// Alternative recorded functionals of the phase ensemble.
enum class ObservableKind {
  mean_field,   // (1/N) sum sin(theta_i)
  single,       // sin(theta_param)
  partial_sum,  // (1/param) sum of sin(theta_i) over the first param oscillators
  phase_sum,    // (1/N) sum of phases wrapped to (-pi, pi]
};

TimeSeries simulate_observable(const EnsembleConfig& config, ObservableKind kind, int param = 0);

}  // namespace pinkam
