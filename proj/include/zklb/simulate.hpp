#ifndef ZKLB_SIMULATE_HPP
#define ZKLB_SIMULATE_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "zklb/diagnostics.hpp"
#include "zklb/solver.hpp"

namespace zklb {

struct DiagnosticsSchedule {
  int record_every = 10;
  std::vector<double> s_list{2.0, 4.0};
  bool increment = false;
  int increment_s = 2;  // order used for the I-decomposition column
  bool store_history = false;
  double t_min_fraction = 0.1;  // transient excluded from growth fits

  void validate() const {
    if (record_every < 1) throw ConfigError("diagnostics: record_every must be >= 1");
    if (!(t_min_fraction >= 0.0 && t_min_fraction < 1.0))
      throw ConfigError("diagnostics: t_min_fraction must lie in [0, 1)");
  }
};

inline DiagnosticsRecord make_record(const ZakharovState& st,
                                     const InitialData* data,
                                     const DiagnosticsSchedule& sched) {
  DiagnosticsRecord r;
  r.t = st.t;
  r.mass = l2_norm(st.u_hat);
  r.hamiltonian = hamiltonian(st);
  r.h1_u = sobolev_norm(st.u_hat, 1.0);
  r.l2_n = l2_norm(st.wave.n_hat);
  r.hneg1_ndot = hhat_minus1_norm(st.wave.ndot_hat);
  for (double s : sched.s_list) r.hs_norms.emplace_back(s, sobolev_norm(st.u_hat, s));
  if (sched.increment && data) {
    const Increment inc = increment_decomposition(st, *data, sched.increment_s);
    r.has_increment = true;
    r.I_total = inc.I_total;
    r.I1 = inc.I1;
    r.I2 = inc.I2;
    r.I3 = inc.I3;
  }
  return r;
}

struct Trajectory {
  InitialData data;
  SplitStepConfig config;
  DiagnosticsSchedule schedule;
  double horizon = 0.0;
  long long steps = 0;
  std::vector<ZakharovState> checkpoints;       // t = 0, every checkpoint_every steps, final
  std::vector<DiagnosticsRecord> records;
  std::vector<SpectralField2D> uu_history;      // midpoint |u|^2 transforms, one per step
  bool aborted = false;
  std::string abort_message;
};

inline bool state_finite(const ZakharovState& st) {
  return std::isfinite(l2_norm(st.u_hat)) && std::isfinite(l2_norm(st.wave.n_hat)) &&
         std::isfinite(l2_norm(st.wave.ndot_hat));
}

/**
 * March the splitting from the given state up to the absolute horizon
 * T = steps*dt with steps = round(T/dt). The start time must sit on the step
 * lattice; all cadences use global step indices, so a run resumed from a
 * checkpoint reproduces the uninterrupted run bit for bit. Checkpoints and
 * records are kept at step multiples plus the endpoints. If a nonfinite field
 * appears the run aborts, keeping the last good checkpoint; callers
 * distinguish physical blow-up from step-size failure by rerunning at smaller
 * dt (the convergence study).
 */
inline Trajectory simulate_from(const InitialData& data, ZakharovState start, double T,
                                const SplitStepConfig& config,
                                const DiagnosticsSchedule& schedule = {}) {
  data.validate();
  config.validate();
  schedule.validate();
  check_same_grid(data.phi_hat.grid, start.u_hat.grid, "simulate_from");
  if (!(T > 0.0) || !std::isfinite(T))
    throw ArgumentError("simulate: horizon T must be positive");

  const long long start_step = std::llround(start.t / config.dt);
  if (std::abs(static_cast<double>(start_step) * config.dt - start.t) >
      1e-9 * (std::abs(start.t) + config.dt))
    throw ArgumentError("simulate: start time is not a multiple of dt; resume with the dt "
                        "the checkpoint was written at");
  if (start_step > 0 && schedule.store_history)
    throw ArgumentError("simulate: store_history needs the full history from t = 0 and "
                        "cannot be combined with a resumed start");

  Trajectory traj;
  traj.data = data;
  traj.config = config;
  traj.schedule = schedule;
  traj.steps = std::llround(T / config.dt);
  if (traj.steps < start_step + 1) traj.steps = start_step + 1;
  traj.horizon = static_cast<double>(traj.steps) * config.dt;

  ZakharovState st = std::move(start);
  st.t = static_cast<double>(start_step) * config.dt;
  traj.checkpoints.push_back(st);
  traj.records.push_back(make_record(st, &data, schedule));
  if (schedule.store_history)
    traj.uu_history.reserve(static_cast<std::size_t>(traj.steps));

  long long last_checkpoint_step = start_step;
  long long last_record_step = start_step;
  for (long long step = start_step + 1; step <= traj.steps; ++step) {
    SpectralField2D uu_mid;
    st = strang_step(std::move(st), config, schedule.store_history ? &uu_mid : nullptr);
    st.t = static_cast<double>(step) * config.dt;  // avoid accumulated additions
    if (schedule.store_history) traj.uu_history.push_back(std::move(uu_mid));
    if (!state_finite(st)) {
      traj.aborted = true;
      traj.abort_message = "nonfinite field at step " + std::to_string(step) +
                           " (t = " + std::to_string(st.t) + ")";
      break;
    }
    if (step % config.checkpoint_every == 0) {
      traj.checkpoints.push_back(st);
      last_checkpoint_step = step;
    }
    if (step % schedule.record_every == 0) {
      traj.records.push_back(make_record(st, &data, schedule));
      last_record_step = step;
    }
  }
  if (!traj.aborted) {
    if (last_checkpoint_step != traj.steps) traj.checkpoints.push_back(st);
    if (last_record_step != traj.steps)
      traj.records.push_back(make_record(st, &data, schedule));
  }
  return traj;
}

inline Trajectory simulate(const InitialData& data, double T,
                           const SplitStepConfig& config,
                           const DiagnosticsSchedule& schedule = {}) {
  data.validate();
  return simulate_from(data, initial_state(data), T, config, schedule);
}

/**
 * Residual of the Duhamel identity n = W(a,b) + box^{-1} Laplacian (|u|^2):
 * per checkpoint, || n(t) - W(a,b)(t) - quadrature ||_{L2} / (||n(t)||_{L2}+1).
 * The quadrature state is marched once through the stored history, so the
 * residual at a given time does not depend on checkpoint spacing.
 */
inline std::vector<std::pair<double, double>> duhamel_check(const Trajectory& traj) {
  if (!traj.schedule.store_history || traj.uu_history.empty())
    throw ArgumentError("duhamel_check: trajectory was run without store_history");
  const GridSpec& g = traj.data.phi_hat.grid;
  const WaveState data_wave = traj.data.wave();

  std::vector<std::pair<double, double>> out;
  WaveState acc = WaveState::zero(g);
  long long marched = 0;
  for (const ZakharovState& cp : traj.checkpoints) {
    const long long step = std::llround(cp.t / traj.config.dt);
    if (static_cast<std::size_t>(step) > traj.uu_history.size())
      throw ArgumentError("duhamel_check: history shorter than checkpoint time");
    for (; marched < step; ++marched)
      acc = forced_oscillator_step(acc, traj.uu_history[static_cast<std::size_t>(marched)],
                                   traj.config.dt);
    const WaveState free_part = free_wave_propagate(data_wave, cp.t);
    SpectralField2D diff = cp.wave.n_hat;
    for (std::size_t i = 0; i < diff.coeffs.size(); ++i)
      diff.coeffs[i] -= free_part.n_hat.coeffs[i] + acc.n_hat.coeffs[i];
    out.emplace_back(cp.t, l2_norm(diff) / (l2_norm(cp.wave.n_hat) + 1.0));
  }
  return out;
}

}  // namespace zklb

#endif
