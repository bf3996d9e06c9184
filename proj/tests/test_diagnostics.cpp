#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "zklb/diagnostics.hpp"
#include "zklb/rng.hpp"
#include "zklb/simulate.hpp"

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

}  // namespace

TEST_CASE("Hamiltonian of a hand-built state", "[diagnostics]") {
  const GridSpec g{32, 2.0 * pi};
  const double L = g.period;
  const double A = 0.3, B = 0.2, C = 0.5;
  ZakharovState st{SpectralField2D::zero(g), WaveState::zero(g), 0.0};
  st.u_hat.at(2, 0) = A * L;  // u = A e^{2ix} + B e^{ix}
  st.u_hat.at(1, 0) = B * L;
  st.wave.n_hat.at(1, 0) = 0.5 * C * L;  // n = C cos x
  st.wave.n_hat.at(31, 0) = 0.5 * C * L;

  // grad = (4A^2 + B^2) L^2, wave = C^2 L^2 / 4,
  // coupling = int C cos x * (A^2 + B^2 + 2AB cos x) = A B C L^2
  const double expect = (4.0 * A * A + B * B) * L * L + 0.25 * C * C * L * L +
                        A * B * C * L * L;
  CHECK(hamiltonian(st) == Catch::Approx(expect).epsilon(1e-12));

  st.wave.ndot_hat.coeffs[0] = 1.0;  // a mean in n_t has no velocity potential
  CHECK_THROWS_AS(hamiltonian(st), MeanFreeError);
}

TEST_CASE("Hamiltonian drift stays at rounding scale over a short run", "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 91, 0.1);
  const Trajectory traj = simulate(d, 0.1, SplitStepConfig{1e-3, true, 100});
  REQUIRE_FALSE(traj.aborted);
  const double h0 = traj.records.front().hamiltonian;
  for (const DiagnosticsRecord& r : traj.records)
    CHECK(std::abs(r.hamiltonian - h0) < 1e-8 * std::abs(h0));
}

TEST_CASE("increment decomposition rejects unsupported orders", "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 97);
  const ZakharovState st = initial_state(d);
  CHECK_THROWS_AS(increment_decomposition(st, d, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(increment_decomposition(st, d, 0), UnsupportedOrderError);
  CHECK_THROWS_AS(increment_decomposition(st, d, -2), UnsupportedOrderError);
}

TEST_CASE("linear term of the increment cancels to rounding", "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  for (int trial = 0; trial < 20; ++trial) {
    const InitialData d = small_data(g, 1000 + 31 * static_cast<std::uint64_t>(trial), 0.5);
    const ZakharovState st = initial_state(d);
    for (int s : {2, 4}) {
      // scale: the real part of the same pairing, sum k^2 (1+k^2)^s |uhat|^2
      double scale = 0.0;
      for (int i1 = 0; i1 < 16; ++i1)
        for (int i2 = 0; i2 < 16; ++i2) {
          const double kx = g.wavenumber(i1), ky = g.wavenumber(i2);
          const double k2 = kx * kx + ky * ky;
          scale += k2 * std::pow(1.0 + k2, s) * std::norm(st.u_hat.at(i1, i2));
        }
      const Increment inc = increment_decomposition(st, d, s);
      CHECK(std::abs(inc.I1) < 1e-13 * scale);
    }
  }
}

TEST_CASE("the dangerous coupling term is an exact floating-point zero",
          "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t seed = 2000 + 17 * static_cast<std::uint64_t>(trial);
    const SpectralField2D u = random_band_field(g, seed, 2.0, 1.0);
    const RealField2D n = inverse_real(random_band_field(g, seed + 3, 2.0, 1.0, true));
    for (int s : {2, 4}) CHECK(dangerous_term_imag(n, u, s) == 0.0);
  }
}

TEST_CASE("increment pieces reassemble the total derivative", "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 123, 0.3);
  Trajectory traj = simulate(d, 0.01, SplitStepConfig{1e-3, true, 100});
  REQUIRE_FALSE(traj.aborted);
  const ZakharovState& st = traj.checkpoints.back();  // n_cubic != 0 by now
  for (int s : {2, 4}) {
    const Increment inc = increment_decomposition(st, d, s);
    const double scale =
        std::abs(inc.I1) + std::abs(inc.I2) + std::abs(inc.I3) +
        2.0 * std::pow(sobolev_norm(st.u_hat, s + 1.0), 2);
    CHECK(std::abs(inc.I_total - (inc.I1 + inc.I2 + inc.I3)) < 1e-10 * scale);
    CHECK(inc.I2 != 0.0);  // the wave really contributes at this state
  }
}

TEST_CASE("records assemble norms in schedule order", "[diagnostics]") {
  const GridSpec g{16, 2.0 * pi};
  const InitialData d = small_data(g, 131, 0.2);
  const ZakharovState st = initial_state(d);
  DiagnosticsSchedule sched;
  sched.s_list = {3.0, 1.5};
  sched.increment = true;
  sched.increment_s = 2;
  const DiagnosticsRecord r = make_record(st, &d, sched);
  REQUIRE(r.hs_norms.size() == 2);
  CHECK(r.hs_norms[0].first == 3.0);
  CHECK(r.hs_norms[0].second == Catch::Approx(sobolev_norm(st.u_hat, 3.0)));
  CHECK(r.hs_norms[1].first == 1.5);
  CHECK(r.has_increment);
  CHECK(r.h1_triple() ==
        Catch::Approx(std::sqrt(r.h1_u * r.h1_u + r.l2_n * r.l2_n +
                                r.hneg1_ndot * r.hneg1_ndot)));
}

TEST_CASE("power-law fit recovers exact and noisy exponents", "[diagnostics]") {
  std::vector<double> t, y;
  for (int i = 1; i <= 20; ++i) {
    t.push_back(static_cast<double>(i));
    y.push_back(3.0 * std::pow(static_cast<double>(i), 2.5));
  }
  const GrowthFit exact = fit_power_law(t, y, 0.0, 7.0);
  CHECK(exact.exponent_alpha == Catch::Approx(2.5).epsilon(1e-12));
  CHECK(exact.prefactor_c == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(exact.residual < 1e-13);
  CHECK(exact.s == 7.0);
  CHECK(exact.points_used == 20);

  const GrowthFit trimmed = fit_power_law(t, y, 10.0);
  CHECK(trimmed.points_used == 11);
  CHECK(trimmed.exponent_alpha == Catch::Approx(2.5).epsilon(1e-12));

  Rng rng(derive_seed(777, 0));
  std::vector<double> noisy;
  for (int i = 1; i <= 200; ++i)
    noisy.push_back(2.0 * std::pow(t.size() > 0 ? static_cast<double>(i) : 1.0, 1.5) *
                    std::exp(0.01 * rng.gaussian()));
  std::vector<double> tt;
  for (int i = 1; i <= 200; ++i) tt.push_back(static_cast<double>(i));
  const GrowthFit noisy_fit = fit_power_law(tt, noisy, 0.0);
  CHECK(std::abs(noisy_fit.exponent_alpha - 1.5) < 0.05);
}

TEST_CASE("power-law fit input contract", "[diagnostics]") {
  const std::vector<double> t{1.0, 2.0, 3.0}, y{1.0, 4.0, 9.0};
  CHECK_THROWS_AS(fit_power_law(t, y, 0.0), InsufficientDataError);  // < 4 points
  const std::vector<double> t4{1.0, 2.0, 3.0, 4.0}, y3{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_power_law(t4, y3, 0.0), ArgumentError);
  const std::vector<double> same{2.0, 2.0, 2.0, 2.0};
  CHECK_THROWS_AS(fit_power_law(same, t4, 0.0), InsufficientDataError);
  const std::vector<double> y4{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_power_law(t4, y4, 100.0), InsufficientDataError);  // all filtered
}

TEST_CASE("growth fit reads the matching norm column", "[diagnostics]") {
  std::vector<DiagnosticsRecord> recs;
  for (int i = 1; i <= 12; ++i) {
    DiagnosticsRecord r;
    r.t = 0.5 * i;
    r.hs_norms = {{2.0, 5.0 * std::pow(r.t, 0.8)}, {4.0, 1.0}};
    recs.push_back(r);
  }
  const GrowthFit fit = fit_growth(recs, 2.0, 1.0);
  CHECK(fit.exponent_alpha == Catch::Approx(0.8).epsilon(1e-12));
  CHECK(fit.s == 2.0);
  CHECK_THROWS_AS(fit_growth(recs, 3.0, 1.0), InsufficientDataError);
}

TEST_CASE("local bound iteration validation", "[diagnostics]") {
  CHECK_THROWS_AS(iterate_local_bound(1.0, 0.0, 1.0, 100), ArgumentError);
  CHECK_THROWS_AS(iterate_local_bound(1.0, 1.1, 1.0, 100), ArgumentError);
  CHECK_THROWS_AS(iterate_local_bound(0.0, 0.5, 1.0, 100), ArgumentError);
  CHECK_THROWS_AS(iterate_local_bound(1.0, 0.5, 0.0, 100), ArgumentError);
  CHECK_THROWS_AS(iterate_local_bound(1.0, 0.5, 1.0, 39), ArgumentError);
}

TEST_CASE("additive recurrence fits the predicted tail power", "[diagnostics]") {
  const BoundIteration lin = iterate_local_bound(1.0, 1.0, 1.0, 2000);
  REQUIRE(lin.sequence.size() == 2001);
  CHECK(lin.sequence[0] == 1.0);
  CHECK(lin.sequence[1] == 2.0);  // x + c x^0
  CHECK(std::abs(lin.fitted_exponent - 1.0) < 0.01);  // delta = 1: linear growth

  const BoundIteration sqrtc = iterate_local_bound(1.0, 0.5, 1.0, 5000);
  CHECK(std::abs(sqrtc.fitted_exponent - 2.0) < 0.05 * 2.0);  // x_n ~ (c n / 2)^2
  for (std::size_t i = 1; i < sqrtc.sequence.size(); ++i)
    REQUIRE(sqrtc.sequence[i] > sqrtc.sequence[i - 1]);
}

TEST_CASE("multiplicative contrast is exactly log-linear and caps at overflow",
          "[diagnostics]") {
  const BoundIteration it = iterate_local_bound(1.0, 0.5, 1.0, 2000);
  // 1 + c = 2: every product is exact, so the fitted slope is log 2
  CHECK(it.mult_rate == Catch::Approx(std::log1p(1.0)).epsilon(1e-12));
  CHECK(it.mult_residual < 1e-10);
  CHECK(it.mult_steps < 2000);    // stopped by the overflow cap
  CHECK(it.mult_steps >= 1000);   // 2^1023 is still finite

  const BoundIteration small = iterate_local_bound(0.3, 0.5, 2.0, 100);
  CHECK(small.mult_steps == 100);
  CHECK(small.mult_rate == Catch::Approx(std::log1p(0.3)).epsilon(1e-10));
  CHECK(small.mult_residual < 1e-10);
}
