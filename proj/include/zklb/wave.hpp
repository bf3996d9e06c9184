#ifndef ZKLB_WAVE_HPP
#define ZKLB_WAVE_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "zklb/field.hpp"
#include "zklb/spectral.hpp"

namespace zklb {

/**
 * State (n, n_t) of the linear wave equation in Fourier space. n is real
 * valued; n_t must be mean-free, which is what places the velocity component
 * in Hhat^{-1} (its norm below is finite exactly when the mean vanishes).
 */
struct WaveState {
  SpectralField2D n_hat;
  SpectralField2D ndot_hat;

  static WaveState zero(const GridSpec& g) {
    return WaveState{SpectralField2D::zero(g, true), SpectralField2D::zero(g, true)};
  }

  void validate(double tol = 1e-12) const {
    n_hat.validate();
    ndot_hat.validate();
    check_same_grid(n_hat.grid, ndot_hat.grid, "wave state");
    if (hermitian_defect(n_hat) > tol)
      throw ConfigError("wave state: n is not real valued (hermitian defect)");
    if (hermitian_defect(ndot_hat) > tol)
      throw ConfigError("wave state: n_t is not real valued (hermitian defect)");
    const double scale = l2_norm(ndot_hat);
    if (std::abs(ndot_hat.coeffs[0]) > tol * scale)
      throw MeanFreeError("wave state: n_t must be mean-free (Hhat^{-1} data)");
  }
};

/**
 * Exact free evolution of n_tt = Laplacian n over time t: each mode rotates,
 *   n(t)   =  cos(|k|t) n0 + sin(|k|t)/|k| n_t0,
 *   n_t(t) = -|k| sin(|k|t) n0 + cos(|k|t) n_t0,
 * with the k = 0 limit n(t) = n0 + t n_t0. Time reversible and, per mode,
 * conserves |n_t|^2/|k|^2 + |n|^2 exactly up to rounding.
 */
inline WaveState free_wave_propagate(const WaveState& w, double t) {
  if (!std::isfinite(t)) throw ArgumentError("free_wave_propagate: t must be finite");
  const GridSpec& g = w.n_hat.grid;
  WaveState out = w;
  const int n = g.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = g.wavenumber(i2);
      const double kk = std::sqrt(kx * kx + ky * ky);
      const std::size_t idx = g.index(i1, i2);
      const cplx a = w.n_hat.coeffs[idx];
      const cplx b = w.ndot_hat.coeffs[idx];
      if (kk == 0.0) {
        out.n_hat.coeffs[idx] = a + t * b;
        continue;
      }
      const double c = std::cos(kk * t);
      const double s = std::sin(kk * t);
      out.n_hat.coeffs[idx] = c * a + (s / kk) * b;
      out.ndot_hat.coeffs[idx] = -kk * s * a + c * b;
    }
  }
  return out;
}

/**
 * Exact step of the forced oscillator n_tt = Laplacian (n + G) with G frozen
 * over the step: substitute m = n + G, rotate (m, n_t) freely, subtract G.
 * Composing with G = -uu yields the coupled wave update of the splitting.
 */
inline WaveState forced_oscillator_step(const WaveState& w,
                                        const SpectralField2D& G_hat, double dt) {
  if (!std::isfinite(dt)) throw ArgumentError("forced_oscillator_step: dt must be finite");
  check_same_grid(w.n_hat.grid, G_hat.grid, "forced_oscillator_step");
  const GridSpec& g = w.n_hat.grid;
  WaveState out = w;
  const int n = g.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = g.wavenumber(i2);
      const double kk = std::sqrt(kx * kx + ky * ky);
      const std::size_t idx = g.index(i1, i2);
      const cplx a = w.n_hat.coeffs[idx];
      const cplx b = w.ndot_hat.coeffs[idx];
      if (kk == 0.0) {
        out.n_hat.coeffs[idx] = a + dt * b;  // forcing enters through Laplacian: none at k = 0
        continue;
      }
      const cplx m = a + G_hat.coeffs[idx];
      const double c = std::cos(kk * dt);
      const double s = std::sin(kk * dt);
      out.n_hat.coeffs[idx] = c * m + (s / kk) * b - G_hat.coeffs[idx];
      out.ndot_hat.coeffs[idx] = -kk * s * m + c * b;
    }
  }
  return out;
}

/**
 * Duhamel solution of box w = Laplacian G with zero initial data at time
 * t = steps*dt, given per-step midpoint samples of the transform of G.
 * Implemented as a composition of exact forced-oscillator steps, so the only
 * error is the midpoint quadrature of the G history, O(dt^2).
 */
inline WaveState duhamel_boxinv(std::span<const SpectralField2D> G_history,
                                double dt, double t) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ArgumentError("duhamel_boxinv: dt must be positive");
  const long long steps = std::llround(t / dt);
  if (std::abs(steps * dt - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw ArgumentError("duhamel_boxinv: t is not an integer multiple of dt");
  if (steps < 0) throw ArgumentError("duhamel_boxinv: t must be nonnegative");
  if (static_cast<std::size_t>(steps) > G_history.size())
    throw ArgumentError("duhamel_boxinv: history shorter than requested time");
  if (G_history.empty()) throw ArgumentError("duhamel_boxinv: empty history");

  const GridSpec& g = G_history[0].grid;
  WaveState acc = WaveState::zero(g);
  // Rotation coefficients are step independent; precompute them per mode.
  const std::size_t total = g.size();
  std::vector<double> cs(total), sk(total), ks(total);
  std::vector<char> zero_mode(total, 0);
  const int n = g.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = g.wavenumber(i2);
      const double kk = std::sqrt(kx * kx + ky * ky);
      const std::size_t idx = g.index(i1, i2);
      const double s = std::sin(kk * dt);
      cs[idx] = std::cos(kk * dt);
      sk[idx] = kk == 0.0 ? dt : s / kk;
      ks[idx] = kk * s;
      zero_mode[idx] = kk == 0.0;
    }
  }
  for (long long step = 0; step < steps; ++step) {
    const SpectralField2D& G = G_history[static_cast<std::size_t>(step)];
    check_same_grid(g, G.grid, "duhamel_boxinv");
    for (std::size_t idx = 0; idx < total; ++idx) {
      const cplx a = acc.n_hat.coeffs[idx];
      const cplx b = acc.ndot_hat.coeffs[idx];
      if (zero_mode[idx]) {
        acc.n_hat.coeffs[idx] = a + dt * b;
        continue;
      }
      const cplx m = a + G.coeffs[idx];
      acc.n_hat.coeffs[idx] = cs[idx] * m + sk[idx] * b - G.coeffs[idx];
      acc.ndot_hat.coeffs[idx] = -ks[idx] * m + cs[idx] * b;
    }
  }
  return acc;
}

/// Distance to the light cone in frequency: min(|lambda-|k||, |lambda+|k||).
inline double cone_distance(double kabs, double lambda) {
  return std::min(std::abs(lambda - kabs), std::abs(lambda + kabs));
}

/**
 * Scalar symbol of (box^{-1} Laplacian)^alpha away from the cone:
 *   (|k| / (1 + min(|lambda-|k||, |lambda+|k||)))^alpha,  alpha in [0,1].
 * alpha = 0 gives the identity weight; the cone trace terms that complete the
 * operator near lambda = +-|k| are assembled by the probes.
 */
struct ConeWeightSpec {
  double alpha = 0.5;
  bool include_trace_term = true;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw ArgumentError("cone weight: alpha must lie in [0, 1]");
  }
};

inline double cone_weight(double kx, double ky, double lambda,
                          const ConeWeightSpec& spec) {
  const double kabs = std::sqrt(kx * kx + ky * ky);
  if (spec.alpha == 0.0) return 1.0;
  return std::pow(kabs / (1.0 + cone_distance(kabs, lambda)), spec.alpha);
}

/**
 * Norm of b in Hhat^{-1}: (sum_{k != 0} |bhat|^2 / |k|^2)^{1/2}, the L2 norm
 * of the curl-free V with div V = b. Requires b mean-free to 1e-10 relative.
 */
inline double hhat_minus1_norm(const SpectralField2D& b_hat) {
  const double scale = l2_norm(b_hat);
  if (std::abs(b_hat.coeffs[0]) > 1e-10 * scale)
    throw MeanFreeError("hhat_minus1_norm: field must be mean-free");
  const GridSpec& g = b_hat.grid;
  const int n = g.n_points;
  double acc = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = g.wavenumber(i2);
      const double k2 = kx * kx + ky * ky;
      if (k2 > 0.0) acc += std::norm(b_hat.at(i1, i2)) / k2;
    }
  }
  return std::sqrt(acc);
}

}  // namespace zklb

#endif
