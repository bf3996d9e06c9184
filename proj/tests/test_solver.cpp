#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "zklb/rng.hpp"
#include "zklb/simulate.hpp"
#include "zklb/solver.hpp"

using namespace zklb;
using std::numbers::pi;

namespace {

InitialData small_data(const GridSpec& g, std::uint64_t seed, double amp = 0.05) {
  InitialData d{random_band_field(g, seed, 2.0, amp),
                random_band_field(g, seed + 7, 2.0, amp, true),
                random_band_field(g, seed + 13, 2.0, amp, true, true)};
  d.validate();
  return d;
}

double field_diff(const SpectralField2D& a, const SpectralField2D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

bool fields_identical(const SpectralField2D& a, const SpectralField2D& b) {
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    if (a.coeffs[i] != b.coeffs[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("linear flow rotates Schrodinger modes and conserves mass", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  ZakharovState s{SpectralField2D::zero(g), WaveState::zero(g), 0.0};
  const cplx a(0.7, -0.4);
  s.u_hat.at(3, 2) = a;  // |k|^2 = 13
  const double dt = 0.21;
  const ZakharovState out = linear_flow(s, dt);
  const cplx expect = a * cplx(std::cos(13.0 * dt), -std::sin(13.0 * dt));
  CHECK(std::abs(out.u_hat.at(3, 2) - expect) < 1e-15);
  CHECK(out.u_hat.at(0, 0) == cplx(0.0));
  CHECK(out.t == 0.0);  // the composed step owns the time stamp

  const InitialData d = small_data(g, 40);
  ZakharovState r = initial_state(d);
  const double m0 = l2_norm(r.u_hat);
  r = linear_flow(std::move(r), 0.77);
  CHECK(l2_norm(r.u_hat) == Catch::Approx(m0).epsilon(1e-14));
}

TEST_CASE("coupling flow under a uniform n is a global phase", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const double C = 0.8;
  ZakharovState s{random_band_field(g, 5, 2.0, 0.3), WaveState::zero(g), 0.0};
  s.wave.n_hat.coeffs[0] = C * g.period;  // constant field n = C
  const SpectralField2D u0 = s.u_hat;
  const double dt = 0.11;
  const ZakharovState out = coupling_flow(s, dt);
  const cplx phase(std::cos(dt * C), -std::sin(dt * C));
  for (std::size_t i = 0; i < u0.coeffs.size(); ++i)
    CHECK(std::abs(out.u_hat.coeffs[i] - phase * u0.coeffs[i]) < 1e-13);
  CHECK(fields_identical(out.wave.n_hat, s.wave.n_hat));  // n never moves here
}

TEST_CASE("coupling flow forcing matches the two-mode product oracle", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const cplx A(0.6, 0.2), B(-0.3, 0.5);
  ZakharovState s{SpectralField2D::zero(g), WaveState::zero(g), 0.0};
  s.u_hat.at(1, 0) = A * g.period;   // u = A e^{i x} + B e^{2 i y}
  s.u_hat.at(0, 2) = B * g.period;
  const double dt = 0.02;
  SpectralField2D uu;
  const ZakharovState out = coupling_flow(s, dt, true, &uu);

  // |u|^2 = |A|^2 + |B|^2 + A conj(B) e^{i(x-2y)} + c.c.
  const double L = g.period;
  CHECK(std::abs(uu.at(0, 0) - (std::norm(A) + std::norm(B)) * L) < 1e-13 * L);
  CHECK(std::abs(uu.at(1, 14) - A * std::conj(B) * L) < 1e-13 * L);
  CHECK(std::abs(uu.at(15, 2) - std::conj(A) * B * L) < 1e-13 * L);

  // nt increment is -dt |k|^2 applied to that transform; |k|^2 = 5 at (1,-2)
  CHECK(std::abs(out.wave.ndot_hat.at(1, 14) - (-dt) * 5.0 * A * std::conj(B) * L) <
        1e-13 * L);
  CHECK(out.wave.ndot_hat.at(0, 0) == cplx(0.0));
}

TEST_CASE("coupling flow preserves |u| pointwise and the total mass", "[solver]") {
  const GridSpec g{32, 4.0 * pi};
  ZakharovState s{random_band_field(g, 17, 2.0, 0.4),
                  WaveState{random_band_field(g, 18, 2.0, 0.6, true),
                            SpectralField2D::zero(g, true)},
                  0.0};
  const std::vector<cplx> before = inverse(s.u_hat);
  const double m0 = l2_norm(s.u_hat);
  const ZakharovState out = coupling_flow(s, 0.13);
  const std::vector<cplx> after = inverse(out.u_hat);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(std::abs(std::abs(after[i]) - std::abs(before[i])) < 1e-14);
  CHECK(l2_norm(out.u_hat) == Catch::Approx(m0).epsilon(1e-14));
}

TEST_CASE("a Strang step is undone by the reversed composition", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 29, 0.3);
  const ZakharovState s0 = initial_state(d);
  const SplitStepConfig cfg{0.01, true, 100};
  ZakharovState s1 = strang_step(s0, cfg);
  CHECK(s1.t == Catch::Approx(cfg.dt));

  ZakharovState back = linear_flow(std::move(s1), -0.5 * cfg.dt);
  back = coupling_flow(std::move(back), -cfg.dt);
  back = linear_flow(std::move(back), -0.5 * cfg.dt);
  const double scale = l2_norm(s0.u_hat) + l2_norm(s0.wave.n_hat) +
                       l2_norm(s0.wave.ndot_hat);
  CHECK(field_diff(back.u_hat, s0.u_hat) < 1e-13 * scale);
  CHECK(field_diff(back.wave.n_hat, s0.wave.n_hat) < 1e-13 * scale);
  CHECK(field_diff(back.wave.ndot_hat, s0.wave.ndot_hat) < 1e-13 * scale);
}

TEST_CASE("with u = 0 the wave marches as the free evolution", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  InitialData d{SpectralField2D::zero(g),
                random_band_field(g, 31, 2.0, 0.7, true),
                random_band_field(g, 32, 2.0, 0.5, true, true)};
  d.validate();
  const SplitStepConfig cfg{0.05, true, 100};
  ZakharovState s = initial_state(d);
  const int k = 20;
  for (int i = 0; i < k; ++i) s = strang_step(std::move(s), cfg);
  const WaveState free_ref = free_wave_propagate(d.wave(), k * cfg.dt);
  const double scale = l2_norm(d.a_hat) + l2_norm(d.b_hat);
  CHECK(field_diff(s.wave.n_hat, free_ref.n_hat) < 1e-12 * scale);
  CHECK(field_diff(s.wave.ndot_hat, free_ref.ndot_hat) < 1e-12 * scale);
  CHECK(l2_norm(s.u_hat) == 0.0);
}

TEST_CASE("config validation and the lifetime heuristic", "[solver]") {
  CHECK_THROWS_AS((SplitStepConfig{0.0, true, 100}.validate()), ConfigError);
  CHECK_THROWS_AS((SplitStepConfig{1e-3, true, 0}.validate()), ConfigError);
  CHECK_NOTHROW((SplitStepConfig{}.validate()));

  CHECK(lifetime_estimate(2.0, 2.0, 3.0) == Catch::Approx(0.75));
  CHECK(lifetime_estimate(1.0, 5.0, 1.0) == Catch::Approx(1.0));
  CHECK_THROWS_AS(lifetime_estimate(0.0, 2.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(lifetime_estimate(-1.0, 2.0, 1.0), ArgumentError);
}

TEST_CASE("simulate keeps checkpoints and records on the step lattice", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 51);
  SplitStepConfig cfg{1e-3, true, 40};
  DiagnosticsSchedule sched;
  sched.record_every = 30;
  const Trajectory traj = simulate(d, 0.1, cfg, sched);

  CHECK(traj.steps == 100);
  CHECK(traj.horizon == Catch::Approx(0.1));
  CHECK_FALSE(traj.aborted);
  REQUIRE(traj.checkpoints.size() == 4);  // 0, 40, 80, final
  CHECK(traj.checkpoints[0].t == 0.0);
  CHECK(traj.checkpoints[1].t == Catch::Approx(0.04));
  CHECK(traj.checkpoints[2].t == Catch::Approx(0.08));
  CHECK(traj.checkpoints[3].t == Catch::Approx(0.1));
  REQUIRE(traj.records.size() == 5);  // 0, 30, 60, 90, final
  CHECK(traj.records[3].t == Catch::Approx(0.09));
  CHECK(traj.records[4].t == Catch::Approx(0.1));
  CHECK(traj.records[0].mass == Catch::Approx(l2_norm(d.phi_hat)));
  CHECK(traj.uu_history.empty());
}

TEST_CASE("simulate aborts cleanly on nonfinite fields", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  InitialData d{SpectralField2D::zero(g), SpectralField2D::zero(g, true),
                SpectralField2D::zero(g, true)};
  d.phi_hat.at(1, 0) = 1e308;  // |u|^2 overflows in the first coupling flow
  const Trajectory traj = simulate(d, 0.1, SplitStepConfig{1e-3, true, 40});
  CHECK(traj.aborted);
  CHECK_FALSE(traj.abort_message.empty());
  REQUIRE(traj.checkpoints.size() == 1);  // only the last good state, t = 0
  CHECK(traj.checkpoints[0].t == 0.0);
}

TEST_CASE("resuming from a checkpoint reproduces the run bit for bit", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 63, 0.2);
  SplitStepConfig cfg{2e-3, true, 25};
  DiagnosticsSchedule sched;
  sched.record_every = 10;
  const Trajectory full = simulate(d, 0.2, cfg, sched);  // 100 steps
  REQUIRE_FALSE(full.aborted);
  REQUIRE(full.checkpoints.size() >= 3);

  const ZakharovState& mid = full.checkpoints[2];  // step 50
  const Trajectory tail = simulate_from(d, mid, 0.2, cfg, sched);
  REQUIRE_FALSE(tail.aborted);

  const ZakharovState& a = full.checkpoints.back();
  const ZakharovState& b = tail.checkpoints.back();
  CHECK(a.t == b.t);
  CHECK(fields_identical(a.u_hat, b.u_hat));
  CHECK(fields_identical(a.wave.n_hat, b.wave.n_hat));
  CHECK(fields_identical(a.wave.ndot_hat, b.wave.ndot_hat));

  // records produced after the resume point agree exactly too
  const DiagnosticsRecord& rf = full.records.back();
  const DiagnosticsRecord& rt = tail.records.back();
  CHECK(rf.t == rt.t);
  CHECK(rf.mass == rt.mass);
  CHECK(rf.hamiltonian == rt.hamiltonian);
  CHECK(rf.h1_u == rt.h1_u);
}

TEST_CASE("resume input contract", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 70);
  const SplitStepConfig cfg{1e-3, true, 10};
  ZakharovState off = initial_state(d);
  off.t = 0.00047;  // not on the dt lattice
  CHECK_THROWS_AS(simulate_from(d, off, 0.01, cfg), ArgumentError);

  ZakharovState resumed = initial_state(d);
  resumed.t = 5 * cfg.dt;
  DiagnosticsSchedule hist;
  hist.store_history = true;
  CHECK_THROWS_AS(simulate_from(d, resumed, 0.01, cfg, hist), ArgumentError);
  CHECK_NOTHROW(simulate_from(d, resumed, 0.01, cfg));

  CHECK_THROWS_AS(simulate(d, -1.0, cfg), ArgumentError);
}

TEST_CASE("stored history closes the Duhamel identity", "[solver]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 83, 0.3);
  SplitStepConfig cfg{1e-3, true, 20};
  DiagnosticsSchedule sched;
  sched.store_history = true;
  const Trajectory traj = simulate(d, 0.06, cfg, sched);
  REQUIRE_FALSE(traj.aborted);
  CHECK(traj.uu_history.size() == 60);

  const auto residuals = duhamel_check(traj);
  REQUIRE(residuals.size() == traj.checkpoints.size());
  CHECK(residuals.front().second < 1e-15);  // t = 0: nothing has moved yet
  for (const auto& [t, r] : residuals) CHECK(r < 1e-6);

  const Trajectory bare = simulate(d, 0.02, cfg);
  CHECK_THROWS_AS(duhamel_check(bare), ArgumentError);
}
