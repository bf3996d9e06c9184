#ifndef ZKLB_SPECTRAL_HPP
#define ZKLB_SPECTRAL_HPP

#include <cmath>
#include <cstdlib>
#include <span>
#include <vector>

#include "zklb/fft.hpp"
#include "zklb/field.hpp"

namespace zklb {

/**
 * Forward transform of complex physical samples:
 *   fhat(k) = (period/n^2) * sum_j f(x_j) e^{-i k.x_j}.
 * With this scaling a plane wave e^{i k0.x} has fhat(k0) = period, and the
 * discrete Parseval identity <f,g>_phys = sum_k fhat conj(ghat) holds exactly.
 */
inline SpectralField2D forward(const GridSpec& g, std::span<const cplx> phys) {
  g.validate();
  if (phys.size() != g.size())
    throw ConfigError("forward: sample count does not match grid size");
  SpectralField2D out = SpectralField2D::zero(g);
  fft::forward2d(g.n_points, phys.data(), out.coeffs.data());
  const double scale = g.period / (static_cast<double>(g.n_points) * g.n_points);
  for (cplx& c : out.coeffs) c *= scale;
  return out;
}

inline SpectralField2D forward(const RealField2D& f) {
  std::vector<cplx> buf(f.values.begin(), f.values.end());
  SpectralField2D out = forward(f.grid, buf);
  out.real_valued = true;
  return out;
}

/// Inverse transform back to physical samples: f_j = (1/period) * IDFT_raw.
inline std::vector<cplx> inverse(const SpectralField2D& f) {
  f.validate();
  std::vector<cplx> out(f.coeffs.size());
  fft::backward2d(f.grid.n_points, f.coeffs.data(), out.data());
  const double scale = 1.0 / f.grid.period;
  for (cplx& c : out) c *= scale;
  return out;
}

/// Inverse transform of a real-valued field; imaginary parts are dropped.
inline RealField2D inverse_real(const SpectralField2D& f) {
  std::vector<cplx> buf = inverse(f);
  RealField2D out{f.grid, std::vector<double>(buf.size())};
  for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
  return out;
}

/// Physical inner product (period/n)^2 sum_j a_j conj(b_j).
inline cplx phys_inner(const GridSpec& g, std::span<const cplx> a,
                       std::span<const cplx> b) {
  if (a.size() != g.size() || b.size() != g.size())
    throw ConfigError("phys_inner: sample count does not match grid size");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  const double h = g.period / g.n_points;
  return s * (h * h);
}

/**
 * Fourier multiplier B^sigma = (-Laplacian)^{sigma/2}: multiply each mode by
 * |k|^sigma. The k = 0 mode is annihilated for sigma > 0, kept for sigma = 0,
 * and for sigma < 0 the input must be mean-free (relative to its l2 size);
 * otherwise the operator is singular.
 */
inline SpectralField2D apply_B(const SpectralField2D& f, double sigma) {
  SpectralField2D out = f;
  if (sigma == 0.0) return out;
  const int n = f.grid.n_points;
  if (sigma < 0.0) {
    const double scale = l2_norm(f);
    if (std::abs(f.coeffs[0]) > 1e-12 * scale)
      throw SingularModeError("apply_B: sigma < 0 requires a mean-free field");
  }
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = f.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = f.grid.wavenumber(i2);
      const double kk = std::sqrt(kx * kx + ky * ky);
      cplx& c = out.at(i1, i2);
      c = (kk == 0.0) ? cplx(0.0) : c * std::pow(kk, sigma);
    }
  }
  return out;
}

/// Sobolev norm (sum_k (1+|k|^2)^s |fhat|^2)^{1/2}.
inline double sobolev_norm(const SpectralField2D& f, double s) {
  const int n = f.grid.n_points;
  double acc = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = f.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = f.grid.wavenumber(i2);
      const double w = std::pow(1.0 + kx * kx + ky * ky, s);
      acc += w * std::norm(f.at(i1, i2));
    }
  }
  return std::sqrt(acc);
}

/**
 * 2/3-rule dealiasing: zero every mode with 3*max(|m1|,|m2|) > n. Quadratic
 * products of surviving modes then alias only into the zeroed band, so one
 * pass after each product removes all aliasing error. Idempotent.
 */
inline SpectralField2D dealias(SpectralField2D f) {
  const int n = f.grid.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const int m1 = std::abs(f.grid.mode(i1));
    for (int i2 = 0; i2 < n; ++i2) {
      const int m2 = std::abs(f.grid.mode(i2));
      if (3 * std::max(m1, m2) > n) f.at(i1, i2) = 0.0;
    }
  }
  return f;
}

/// Transform of the pointwise product a*b given physical samples.
inline SpectralField2D product_transform(const GridSpec& g,
                                         std::span<const cplx> a,
                                         std::span<const cplx> b,
                                         bool dealias_product) {
  std::vector<cplx> prod(g.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
  SpectralField2D out = forward(g, prod);
  if (dealias_product) out = dealias(std::move(out));
  return out;
}

}  // namespace zklb

#endif
