#include "core/kuramoto.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace pinkam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reference_freq(const EnsembleConfig& c) {
  if (c.explicit_freqs.empty()) return c.freq_center;
  double f = 0.0;
  for (double v : c.explicit_freqs) f = std::max(f, std::abs(v));
  return f;
}

double wrap_principal(double theta) {
  double w = std::remainder(theta, kTwoPi);  // (-pi, pi], remainder gives [-pi, pi]
  if (w <= -std::numbers::pi) w = std::numbers::pi;
  return w;
}

// Coupling sums shared by both models: S = sum sin, C = sum cos.
struct FieldSums {
  double s = 0.0;
  double c = 0.0;
};

FieldSums field_sums(const std::vector<double>& phases) {
  FieldSums f;
  for (double th : phases) {
    f.s += std::sin(th);
    f.c += std::cos(th);
  }
  return f;
}

void check_phases_finite(const EnsembleState& state) {
  for (std::size_t i = 0; i < state.phases.size(); ++i) {
    if (!std::isfinite(state.phases[i]))
      throw std::runtime_error("kuramoto: oscillator " + std::to_string(i) +
                               " diverged at t=" + std::to_string(state.t));
  }
}

double draw_amount(std::mt19937_64& rng, const ResetPolicy& policy) {
  double u = uniform(rng, policy.amount_lo, policy.amount_hi);
  if (policy.unit == AngleUnit::turns) u *= kTwoPi;
  return u;
}

// Shared integration loop: advances the ensemble and hands every state to
// record() at the requested cadence (nearest integration step, no
// interpolation).
template <typename Recorder>
void run(const EnsembleConfig& config, Recorder&& record) {
  validate(config);
  EnsembleState state = init_ensemble(config);

  const auto n_rec = static_cast<std::size_t>(std::llround(config.duration * config.record_rate));
  const double steps_per_record = 1.0 / (config.record_rate * config.dt);

  std::size_t step = 0;
  for (std::size_t k = 0; k < n_rec; ++k) {
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(k) * steps_per_record));
    while (step < target) {
      if (config.model == Model::first_order)
        step_first_order(state, config);
      else
        step_second_order(state, config);
      ++step;
    }
    record(state);
  }
}

}  // namespace

void validate(const EnsembleConfig& config) {
  if (config.n < 1) throw std::invalid_argument("kuramoto: need at least one oscillator");
  if (config.coupling < 0.0) throw std::invalid_argument("kuramoto: coupling must be >= 0");
  if (config.dt <= 0.0) throw std::invalid_argument("kuramoto: dt must be positive");
  const double f_ref = reference_freq(config);
  if (f_ref <= 0.0) throw std::invalid_argument("kuramoto: frequencies must be positive");
  if (config.freq_spread < 0.0) throw std::invalid_argument("kuramoto: freq_spread must be >= 0");
  if (config.dt > 1.0 / (20.0 * f_ref))
    throw std::invalid_argument("kuramoto: dt too coarse, need >= 20 steps per oscillation");
  if (config.duration <= 0.0) throw std::invalid_argument("kuramoto: duration must be positive");
  if (config.record_rate <= 0.0 || config.record_rate > 1.0 / config.dt)
    throw std::invalid_argument("kuramoto: record_rate must be in (0, 1/dt]");
  if (!config.explicit_freqs.empty() &&
      config.explicit_freqs.size() != static_cast<std::size_t>(config.n))
    throw std::invalid_argument("kuramoto: explicit_freqs must list one frequency per oscillator");
  if (config.reset.enabled) {
    if (config.reset.max_interval <= 0.0)
      throw std::invalid_argument("kuramoto: reset max_interval must be positive");
    if (config.reset.amount_hi < config.reset.amount_lo)
      throw std::invalid_argument("kuramoto: reset amount range is empty");
  }
}

EnsembleState init_ensemble(const EnsembleConfig& config) {
  validate(config);
  const auto n = static_cast<std::size_t>(config.n);

  EnsembleState state;
  state.t = 0.0;
  state.phases.resize(n);
  state.natural_freqs.resize(n);
  state.next_reset.assign(n, 0.0);

  std::mt19937_64 master(config.seed);
  if (config.explicit_freqs.empty()) {
    const double lo = config.freq_center * (1.0 - config.freq_spread);
    const double hi = config.freq_center * (1.0 + config.freq_spread);
    for (auto& f : state.natural_freqs) f = uniform(master, lo, hi);
  } else {
    state.natural_freqs = config.explicit_freqs;
  }
  for (auto& th : state.phases) th = uniform(master, 0.0, kTwoPi);
  if (config.model == Model::second_order) state.velocities.assign(n, 0.0);

  state.reset_rngs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    state.reset_rngs[i].seed(splitmix64(splitmix64(config.seed) ^ (static_cast<std::uint64_t>(i) + 1)));
  }
  if (config.reset.enabled) {
    for (std::size_t i = 0; i < n; ++i) {
      state.next_reset[i] = uniform(state.reset_rngs[i], 0.0, config.reset.max_interval);
    }
  }
  return state;
}

void step_first_order(EnsembleState& state, const EnsembleConfig& config) {
  const auto n = state.phases.size();
  const double kn = config.coupling / static_cast<double>(n);
  const FieldSums f = field_sums(state.phases);

  for (std::size_t i = 0; i < n; ++i) {
    // (K/N) sum_j sin(theta_j - theta_i) = (K/N)(S cos(theta_i) - C sin(theta_i))
    const double coupling = kn * (f.s * std::cos(state.phases[i]) - f.c * std::sin(state.phases[i]));
    state.phases[i] += config.dt * (kTwoPi * state.natural_freqs[i] + coupling);
  }
  state.t += config.dt;
  if (config.reset.enabled) apply_resets(state, config.reset);
  check_phases_finite(state);
}

void step_second_order(EnsembleState& state, const EnsembleConfig& config) {
  const auto n = state.phases.size();
  const double kn = config.coupling / static_cast<double>(n);
  const FieldSums f = field_sums(state.phases);

  // Semi-implicit Euler: velocity first, then position with the new velocity.
  for (std::size_t i = 0; i < n; ++i) {
    const double w = kTwoPi * state.natural_freqs[i];
    const double coupling = kn * (f.s * std::cos(state.phases[i]) - f.c * std::sin(state.phases[i]));
    const double accel = -w * w * state.phases[i] + coupling;
    state.velocities[i] += config.dt * accel;
    state.phases[i] += config.dt * state.velocities[i];
  }
  state.t += config.dt;
  if (config.reset.enabled) apply_resets(state, config.reset);
  check_phases_finite(state);
}

void apply_resets(EnsembleState& state, const ResetPolicy& policy) {
  if (!policy.enabled) return;
  for (std::size_t i = 0; i < state.phases.size(); ++i) {
    while (state.next_reset[i] <= state.t) {
      const double u = draw_amount(state.reset_rngs[i], policy);
      if (policy.mode == ResetMode::shift)
        state.phases[i] += u;
      else
        state.phases[i] = u;
      double gap = 0.0;
      do {
        gap = uniform(state.reset_rngs[i], 0.0, policy.max_interval);
      } while (gap == 0.0);
      state.next_reset[i] += gap;
    }
  }
}

std::pair<double, double> order_parameter(std::span<const double> phases) {
  if (phases.empty()) throw std::invalid_argument("kuramoto: order parameter of empty ensemble");
  double s = 0.0, c = 0.0;
  for (double th : phases) {
    s += std::sin(th);
    c += std::cos(th);
  }
  const double inv = 1.0 / static_cast<double>(phases.size());
  double r = std::hypot(s, c) * inv;
  r = std::min(r, 1.0);
  double psi = std::atan2(s, c);
  if (psi <= -std::numbers::pi) psi = std::numbers::pi;
  return {r, psi};
}

double mean_field_signal(std::span<const double> phases) {
  if (phases.empty()) throw std::invalid_argument("kuramoto: mean field of empty ensemble");
  double s = 0.0;
  for (double th : phases) s += std::sin(th);
  return s / static_cast<double>(phases.size());
}

Trajectory simulate(const EnsembleConfig& config) {
  std::vector<double> xs, rs, psis;
  run(config, [&](const EnsembleState& state) {
    const auto [r, psi] = order_parameter(state.phases);
    xs.push_back(mean_field_signal(state.phases));
    rs.push_back(r);
    psis.push_back(psi);
  });

  Trajectory traj;
  traj.x = TimeSeries(std::move(xs), config.record_rate);
  traj.r = TimeSeries(std::move(rs), config.record_rate);
  traj.psi = TimeSeries(std::move(psis), config.record_rate);
  traj.config = config;
  return traj;
}

TimeSeries simulate_observable(const EnsembleConfig& config, ObservableKind kind, int param) {
  if (kind == ObservableKind::single && (param < 0 || param >= config.n))
    throw std::invalid_argument("kuramoto: oscillator index out of range");
  if (kind == ObservableKind::partial_sum && (param < 1 || param > config.n))
    throw std::invalid_argument("kuramoto: partial sum size out of range");

  std::vector<double> out;
  run(config, [&](const EnsembleState& state) {
    switch (kind) {
      case ObservableKind::mean_field:
        out.push_back(mean_field_signal(state.phases));
        break;
      case ObservableKind::single:
        out.push_back(std::sin(state.phases[static_cast<std::size_t>(param)]));
        break;
      case ObservableKind::partial_sum: {
        double s = 0.0;
        for (int i = 0; i < param; ++i) s += std::sin(state.phases[static_cast<std::size_t>(i)]);
        out.push_back(s / static_cast<double>(param));
        break;
      }
      case ObservableKind::phase_sum: {
        double s = 0.0;
        for (double th : state.phases) s += wrap_principal(th);
        out.push_back(s / static_cast<double>(state.phases.size()));
        break;
      }
    }
  });
  return TimeSeries(std::move(out), config.record_rate);
}

}  // namespace pinkam
