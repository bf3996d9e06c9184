#ifndef ZKLB_DIAGNOSTICS_HPP
#define ZKLB_DIAGNOSTICS_HPP

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "zklb/solver.hpp"

namespace zklb {

/** One row of the diagnostics time series. */
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double h1_u = 0.0;        // ||u||_{H^1}
  double l2_n = 0.0;        // ||n||_{L^2}
  double hneg1_ndot = 0.0;  // ||n_t||_{Hhat^{-1}}
  std::vector<std::pair<double, double>> hs_norms;  // (s, ||u||_{H^s}) in schedule order
  bool has_increment = false;
  double I_total = 0.0, I1 = 0.0, I2 = 0.0, I3 = 0.0;

  /// The combined quantity whose a priori control drives the global theory.
  double h1_triple() const {
    return std::sqrt(h1_u * h1_u + l2_n * l2_n + hneg1_ndot * hneg1_ndot);
  }
};

/**
 * Conserved energy
 *   H = sum_k |k|^2 |uhat|^2 + 1/2 ( sum_k |nhat|^2 + sum_{k!=0} |nthat|^2/|k|^2 )
 *       + <n, |u|^2>_phys,
 * with the velocity potential realized as the curl-free V, |Vhat| = |nthat|/|k|.
 */
inline double hamiltonian(const ZakharovState& st) {
  const GridSpec& g = st.u_hat.grid;
  const int n = g.n_points;
  double grad = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = g.wavenumber(i2);
      grad += (kx * kx + ky * ky) * std::norm(st.u_hat.at(i1, i2));
    }
  }
  const double n_l2 = l2_norm(st.wave.n_hat);
  const double v_l2 = hhat_minus1_norm(st.wave.ndot_hat);  // throws if n_t has a mean

  const std::vector<cplx> u_phys = inverse(st.u_hat);
  const RealField2D n_phys = inverse_real(st.wave.n_hat);
  double coupling = 0.0;
  for (std::size_t i = 0; i < u_phys.size(); ++i)
    coupling += n_phys.values[i] * std::norm(u_phys[i]);
  const double h = g.period / g.n_points;
  coupling *= h * h;

  return grad + 0.5 * (n_l2 * n_l2 + v_l2 * v_l2) + coupling;
}

struct Increment {
  double I_total = 0.0;
  double I1 = 0.0;  // -2 Im <B^s Lap u, B^s u>: real integrand, identically zero
  double I2 = 0.0;  // 2 Im <B^s(n_free u), B^s u>
  double I3 = 0.0;  // 2 Im <B^s(n_cubic u), B^s u>
};

/**
 * Decomposition of d/dt ||B^s u||^2 = 2 Re <B^s u_t, B^s u> into the linear
 * term and the contributions of n_free = W(a,b)(t) (propagated exactly from
 * the stored data, so the split carries no quadrature error) and of
 * n_cubic = n - n_free. Requires even integer s >= 2.
 */
inline Increment increment_decomposition(const ZakharovState& st,
                                         const InitialData& data, int s) {
  if (s < 2 || s % 2 != 0)
    throw UnsupportedOrderError("increment_decomposition: s must be an even integer >= 2");
  const GridSpec& g = st.u_hat.grid;
  check_same_grid(g, data.a_hat.grid, "increment_decomposition");

  const SpectralField2D bs_u = apply_B(st.u_hat, static_cast<double>(s));

  const SpectralField2D n_free_hat = free_wave_propagate(data.wave(), st.t).n_hat;
  SpectralField2D n_cubic_hat = st.wave.n_hat;
  for (std::size_t i = 0; i < n_cubic_hat.coeffs.size(); ++i)
    n_cubic_hat.coeffs[i] -= n_free_hat.coeffs[i];

  const std::vector<cplx> u_phys = inverse(st.u_hat);
  const RealField2D n_free = inverse_real(n_free_hat);
  const RealField2D n_cubic = inverse_real(n_cubic_hat);

  auto paired = [&](const RealField2D& pot) {
    std::vector<cplx> prod(g.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = pot.values[i] * u_phys[i];
    SpectralField2D bs_prod = apply_B(forward(g, prod), static_cast<double>(s));
    return inner(bs_prod, bs_u);
  };

  Increment out;
  // I1: <B^s Lap u, B^s u> = -sum |k|^{2s+2} |uhat|^2 has a real integrand.
  // Computed generically (no realness shortcut), the imaginary part survives
  // only at rounding level, which is what the cancellation tests pin down.
  {
    SpectralField2D lap_u = st.u_hat;
    const int n = g.n_points;
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = g.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2)
        lap_u.at(i1, i2) *= -(kx * kx + g.wavenumber(i2) * g.wavenumber(i2));
    }
    out.I1 = -2.0 * inner(apply_B(lap_u, static_cast<double>(s)), bs_u).imag();
  }
  out.I2 = 2.0 * paired(n_free).imag();
  out.I3 = 2.0 * paired(n_cubic).imag();

  // I_total from the equation: u_t = i Lap u - i n u with n = n_free + n_cubic.
  {
    std::vector<cplx> nu(g.size());
    for (std::size_t i = 0; i < nu.size(); ++i)
      nu[i] = (n_free.values[i] + n_cubic.values[i]) * u_phys[i];
    SpectralField2D nu_hat = forward(g, nu);
    SpectralField2D ut_hat = st.u_hat;
    const int n = g.n_points;
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = g.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double k2 = kx * kx + g.wavenumber(i2) * g.wavenumber(i2);
        const std::size_t idx = g.index(i1, i2);
        ut_hat.coeffs[idx] = cplx(0.0, -1.0) * (k2 * st.u_hat.coeffs[idx] + nu_hat.coeffs[idx]);
      }
    }
    out.I_total = 2.0 * inner(apply_B(ut_hat, static_cast<double>(s)), bs_u).real();
  }
  return out;
}

/**
 * The cancellation that kills the most dangerous coupling term: for real n,
 * 2 Im <n B^s u, B^s u> evaluated as a physical-space quadrature. Each
 * summand is n_j |w_j|^2 with exactly real |w_j|^2, so the result is an
 * exact floating-point zero; returned (not asserted) so tests can verify.
 */
inline double dangerous_term_imag(const RealField2D& n_phys,
                                  const SpectralField2D& u_hat, int s) {
  check_same_grid(n_phys.grid, u_hat.grid, "dangerous_term_imag");
  const std::vector<cplx> w = inverse(apply_B(u_hat, static_cast<double>(s)));
  cplx acc = 0.0;
  // grouping matters: w conj(w) first, so its imaginary part cancels exactly
  // before the real scaling by n touches it
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += n_phys.values[i] * (w[i] * std::conj(w[i]));
  const double h = n_phys.grid.period / n_phys.grid.n_points;
  return 2.0 * (acc * h * h).imag();
}

struct GrowthFit {
  double s = 0.0;
  double t_min = 0.0;
  double exponent_alpha = 0.0;
  double prefactor_c = 0.0;
  double residual = 0.0;  // RMS in log-log coordinates
  int points_used = 0;
};

/// Least-squares fit of log y = alpha log t + log C over samples with t >= t_min.
inline GrowthFit fit_power_law(std::span<const double> t, std::span<const double> y,
                               double t_min, double s_tag = 0.0) {
  if (t.size() != y.size()) throw ArgumentError("fit_power_law: length mismatch");
  std::vector<double> lt, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_min && t[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lt.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t m = lt.size();
  if (m < 4)
    throw InsufficientDataError("fit_power_law: need at least 4 usable samples past t_min");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += lt[i]; sy += ly[i]; sxx += lt[i] * lt[i]; sxy += lt[i] * ly[i];
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-14 * m * sxx + 1e-300)
    throw InsufficientDataError("fit_power_law: degenerate abscissae");
  GrowthFit fit;
  fit.s = s_tag;
  fit.t_min = t_min;
  fit.exponent_alpha = (m * sxy - sx * sy) / denom;
  fit.prefactor_c = std::exp((sy - fit.exponent_alpha * sx) / m);
  double rss = 0.0;
  const double logc = std::log(fit.prefactor_c);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (fit.exponent_alpha * lt[i] + logc);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  fit.points_used = static_cast<int>(m);
  return fit;
}

/// Fit ||u(t)||_{H^s} ~ C t^alpha over the recorded time series.
inline GrowthFit fit_growth(std::span<const DiagnosticsRecord> records, double s,
                            double t_min) {
  std::vector<double> t, y;
  for (const DiagnosticsRecord& r : records) {
    for (const auto& [order, value] : r.hs_norms) {
      if (order == s) {
        t.push_back(r.t);
        y.push_back(value);
      }
    }
  }
  if (t.empty())
    throw InsufficientDataError("fit_growth: no records carry the requested order");
  return fit_power_law(t, y, t_min, s);
}

struct BoundIteration {
  std::vector<double> sequence;  // x_0 .. x_steps of the additive recurrence
  double fitted_exponent = 0.0;  // power of n fitted to the tail
  double fit_residual = 0.0;
  int mult_steps = 0;            // steps of the multiplicative variant before overflow cap
  double mult_rate = 0.0;        // fitted slope of log x_n vs n
  double mult_residual = 0.0;    // RMS residual of that line
};

/**
 * Iterate the local-theory recurrence x_{n+1} = x_n + c x_n^{1-delta}, whose
 * tail grows like (delta c n)^{1/delta}, and fit the exponent; also iterate
 * the multiplicative contrast x_{n+1} = (1+c) x_n, which is exactly
 * log-linear. The additive fit uses the last 90% of the samples.
 */
inline BoundIteration iterate_local_bound(double c, double delta, double x0, int steps) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw ArgumentError("iterate_local_bound: delta must lie in (0, 1]");
  if (!(c > 0.0) || !(x0 > 0.0))
    throw ArgumentError("iterate_local_bound: c and x0 must be positive");
  if (steps < 40) throw ArgumentError("iterate_local_bound: need at least 40 steps");

  BoundIteration out;
  out.sequence.reserve(static_cast<std::size_t>(steps) + 1);
  out.sequence.push_back(x0);
  double x = x0;
  for (int n = 0; n < steps; ++n) {
    x = x + c * std::pow(x, 1.0 - delta);
    if (!std::isfinite(x)) throw ArgumentError("iterate_local_bound: sequence overflowed");
    out.sequence.push_back(x);
  }
  {
    std::vector<double> ns, xs;
    for (int n = std::max(1, steps / 10); n <= steps; ++n) {
      ns.push_back(static_cast<double>(n));
      xs.push_back(out.sequence[static_cast<std::size_t>(n)]);
    }
    const GrowthFit fit = fit_power_law(ns, xs, 0.0);
    out.fitted_exponent = fit.exponent_alpha;
    out.fit_residual = fit.residual;
  }

  // Multiplicative variant: iterate by products, stopping before overflow,
  // and take logs afterwards; summing logs instead would pile up rounding.
  std::vector<double> ns, logs;
  double m = x0;
  for (int n = 0;; ++n) {
    ns.push_back(static_cast<double>(n));
    logs.push_back(std::log(m));
    if (n == steps || m > std::numeric_limits<double>::max() / (1.0 + c)) break;
    m *= (1.0 + c);
  }
  out.mult_steps = static_cast<int>(ns.size()) - 1;
  if (ns.size() < 2) {
    out.mult_rate = std::log1p(c);
    out.mult_residual = 0.0;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    sx += ns[i]; sy += logs[i]; sxx += ns[i] * ns[i]; sxy += ns[i] * logs[i];
  }
  const double denom = cnt * sxx - sx * sx;
  out.mult_rate = (cnt * sxy - sx * sy) / denom;
  const double icept = (sy - out.mult_rate * sx) / cnt;
  double rss = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double r = logs[i] - (out.mult_rate * ns[i] + icept);
    rss += r * r;
  }
  out.mult_residual = std::sqrt(rss / cnt);
  return out;
}

}  // namespace zklb

#endif
