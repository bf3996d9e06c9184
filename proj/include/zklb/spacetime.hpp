#ifndef ZKLB_SPACETIME_HPP
#define ZKLB_SPACETIME_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "zklb/fft.hpp"
#include "zklb/field.hpp"
#include "zklb/spectral.hpp"

namespace zklb {

/**
 * Smooth cutoff ~ chi_[0,T]: raised-cosine roll-on over [0,F], plateau of
 * length T, roll-off over [F+T, 2F+T], with F = flank_fraction*T. Fields are
 * sampled on [0, T_win) with T_win = T(1+2*flank_fraction), so the windowed
 * signal vanishes smoothly at both ends of the periodization interval.
 */
struct TimeWindow {
  double t_total = 1.0;
  double flank_fraction = 0.1;

  void validate() const {
    if (!(t_total > 0.0) || !std::isfinite(t_total))
      throw ConfigError("time window: t_total must be positive");
    if (!(flank_fraction >= 0.0 && flank_fraction <= 1.0))
      throw ConfigError("time window: flank_fraction must lie in [0, 1]");
  }

  double t_win() const { return t_total * (1.0 + 2.0 * flank_fraction); }

  double value(double t) const {
    const double F = flank_fraction * t_total;
    if (F == 0.0) return (t >= 0.0 && t <= t_total) ? 1.0 : 0.0;
    if (t <= 0.0 || t >= t_win()) return 0.0;
    if (t < F) return 0.5 * (1.0 - std::cos(std::numbers::pi * t / F));
    if (t <= F + t_total) return 1.0;
    return 0.5 * (1.0 - std::cos(std::numbers::pi * (t_win() - t) / F));
  }
};

/**
 * Complex field on the space-time lattice [0,L)^2 x [0,T_win), sampled
 * time-major: samples[(it*n + i1)*n + i2]. The dual lattice is
 * (k, lambda) with lambda = 2*pi*j/T_win, j in [-m/2, m/2), and transforms
 * are normalized so that
 *
 *   fhat(k,lambda) = (L/n^2)(sqrt(T_win)/m) sum f e^{-i(k.x + lambda t)},
 *
 * which makes sum |fhat|^2 = integral |f|^2 dx dt exactly on the lattice.
 */
struct SpaceTimeField {
  GridSpec grid;
  double t_window = 1.0;
  int m_steps = 8;
  std::vector<cplx> samples;
  bool windowed = false;

  void validate() const {
    grid.validate();
    if (!is_power_of_two(m_steps) || m_steps < 8)
      throw ConfigError("space-time field: m_steps must be a power of two >= 8");
    if (!(t_window > 0.0))
      throw ConfigError("space-time field: t_window must be positive");
    if (samples.size() != grid.size() * static_cast<std::size_t>(m_steps))
      throw ConfigError("space-time field: sample count does not match lattice");
  }

  static SpaceTimeField zero(const GridSpec& g, double t_window, int m_steps) {
    SpaceTimeField f{g, t_window, m_steps,
                     std::vector<cplx>(g.size() * static_cast<std::size_t>(m_steps)), false};
    f.validate();
    return f;
  }

  double time_of(int it) const { return t_window * it / m_steps; }

  /// Signed integer time-mode for slot jt.
  int lambda_mode(int jt) const { return jt < m_steps / 2 ? jt : jt - m_steps; }

  double lambda_of(int jt) const {
    return 2.0 * std::numbers::pi * lambda_mode(jt) / t_window;
  }

  std::size_t index(int it, int i1, int i2) const {
    return (static_cast<std::size_t>(it) * grid.n_points + i1) * grid.n_points + i2;
  }
};

/// Normalization constant of the space-time forward transform.
inline double st_forward_scale(const SpaceTimeField& f) {
  const double n2 = static_cast<double>(f.grid.n_points) * f.grid.n_points;
  return (f.grid.period / n2) * (std::sqrt(f.t_window) / f.m_steps);
}

/// Forward 3D transform (2 space + 1 time) to normalized coefficients.
inline std::vector<cplx> st_forward(const SpaceTimeField& f) {
  f.validate();
  std::vector<cplx> out(f.samples.size());
  fft::forward3d(f.m_steps, f.grid.n_points, f.samples.data(), out.data());
  const double scale = st_forward_scale(f);
  for (cplx& c : out) c *= scale;
  return out;
}

/// Inverse of st_forward; the windowed flag is taken from the caller.
inline SpaceTimeField st_from_coeffs(const GridSpec& g, double t_window, int m_steps,
                                     const std::vector<cplx>& coeffs,
                                     bool windowed = false) {
  SpaceTimeField f = SpaceTimeField::zero(g, t_window, m_steps);
  if (coeffs.size() != f.samples.size())
    throw ConfigError("st_from_coeffs: coefficient count does not match lattice");
  fft::backward3d(m_steps, g.n_points, coeffs.data(), f.samples.data());
  const double scale = 1.0 / (g.period * std::sqrt(t_window));
  for (cplx& c : f.samples) c *= scale;
  f.windowed = windowed;
  return f;
}

/// Multiply each time slice by psi_T; the window must span the field's lattice.
inline SpaceTimeField apply_window(SpaceTimeField f, const TimeWindow& w) {
  f.validate();
  w.validate();
  if (std::abs(w.t_win() - f.t_window) > 1e-9 * f.t_window)
    throw ArgumentError("apply_window: window span does not match the field lattice");
  const std::size_t slice = f.grid.size();
  for (int it = 0; it < f.m_steps; ++it) {
    const double psi = w.value(f.time_of(it));
    for (std::size_t i = 0; i < slice; ++i)
      f.samples[static_cast<std::size_t>(it) * slice + i] *= psi;
  }
  f.windowed = true;
  return f;
}

/**
 * X_{s,b} norm: ( sum (1+|k|^2)^s (1+|lambda+|k|^2|)^{2b} |fhat|^2 )^{1/2}.
 * Free Schrodinger waves concentrate at lambda = -|k|^2, where the parabolic
 * weight is 1. Demands a windowed field; periodizing a signal that has not
 * been cut off in time would fold jump artifacts into every lambda.
 */
inline double xsb_norm(const SpaceTimeField& f, double s, double b) {
  if (!f.windowed)
    throw ContractError("xsb_norm: field must be windowed before taking X norms");
  const std::vector<cplx> coeffs = st_forward(f);
  const int n = f.grid.n_points;
  double acc = 0.0;
  for (int it = 0; it < f.m_steps; ++it) {
    const double lambda = f.lambda_of(it);
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = f.grid.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = f.grid.wavenumber(i2);
        const double k2 = kx * kx + ky * ky;
        const double w = std::pow(1.0 + k2, s) *
                         std::pow(1.0 + std::abs(lambda + k2), 2.0 * b);
        acc += w * std::norm(coeffs[f.index(it, i1, i2)]);
      }
    }
  }
  return std::sqrt(acc);
}

/// Space-time L2 norm by physical quadrature.
inline double st_l2_norm(const SpaceTimeField& f) {
  double acc = 0.0;
  for (const cplx& c : f.samples) acc += std::norm(c);
  const double hx = f.grid.period / f.grid.n_points;
  const double ht = f.t_window / f.m_steps;
  return std::sqrt(acc * hx * hx * ht);
}

/// Space-time L4 norm by physical quadrature.
inline double st_l4_norm(const SpaceTimeField& f) {
  double acc = 0.0;
  for (const cplx& c : f.samples) {
    const double a2 = std::norm(c);
    acc += a2 * a2;
  }
  const double hx = f.grid.period / f.grid.n_points;
  const double ht = f.t_window / f.m_steps;
  return std::pow(acc * hx * hx * ht, 0.25);
}

/**
 * Windowed free Schrodinger wave psi_T(t) e^{it Lap} phi: exact per-mode
 * phases e^{-i|k|^2 t_j} per slice, then the window.
 */
inline SpaceTimeField free_solution(const SpectralField2D& phi_hat,
                                    const TimeWindow& window, int m_steps) {
  phi_hat.validate();
  window.validate();
  const GridSpec& g = phi_hat.grid;
  SpaceTimeField f = SpaceTimeField::zero(g, window.t_win(), m_steps);
  const int n = g.n_points;
  SpectralField2D slice = SpectralField2D::zero(g);
  for (int it = 0; it < m_steps; ++it) {
    const double t = f.time_of(it);
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = g.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = g.wavenumber(i2);
        const double k2 = kx * kx + ky * ky;
        slice.at(i1, i2) = phi_hat.at(i1, i2) * cplx(std::cos(k2 * t), -std::sin(k2 * t));
      }
    }
    const std::vector<cplx> phys = inverse(slice);
    std::copy(phys.begin(), phys.end(),
              f.samples.begin() + static_cast<std::size_t>(it) * g.size());
  }
  return apply_window(std::move(f), window);
}

}  // namespace zklb

#endif
