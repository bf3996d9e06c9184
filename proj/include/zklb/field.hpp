#ifndef ZKLB_FIELD_HPP
#define ZKLB_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "zklb/grid.hpp"

namespace zklb {

using cplx = std::complex<double>;

/**
 * Fourier coefficients of a 2D periodic field, row-major over (i1, i2) in
 * FFT index layout. The normalization (fixed in spectral.hpp) is
 *
 *   fhat(k) = (period/n^2) * sum_j f(x_j) e^{-i k.x_j},
 *
 * so that <f,g>_phys = (period/n)^2 sum_j f_j conj(g_j) equals
 * sum_k fhat(k) conj(ghat(k)) exactly on the grid.
 *
 * real_valued marks fields whose physical samples are real, i.e. whose
 * coefficients satisfy fhat(-k) = conj(fhat(k)).
 */
struct SpectralField2D {
  GridSpec grid;
  std::vector<cplx> coeffs;
  bool real_valued = false;

  static SpectralField2D zero(const GridSpec& g, bool real = false) {
    return SpectralField2D{g, std::vector<cplx>(g.size()), real};
  }

  cplx& at(int i1, int i2) { return coeffs[grid.index(i1, i2)]; }
  const cplx& at(int i1, int i2) const { return coeffs[grid.index(i1, i2)]; }

  void validate() const {
    grid.validate();
    if (coeffs.size() != grid.size())
      throw ConfigError("field: coefficient count does not match grid size");
  }
};

/** Physical samples of a real 2D field, row-major over (i1, i2). */
struct RealField2D {
  GridSpec grid;
  std::vector<double> values;

  static RealField2D zero(const GridSpec& g) {
    return RealField2D{g, std::vector<double>(g.size())};
  }
};

/// l2 norm of the coefficient array; by Parseval this is the physical L2 norm.
inline double l2_norm(const SpectralField2D& f) {
  double s = 0.0;
  for (const cplx& c : f.coeffs) s += std::norm(c);
  return std::sqrt(s);
}

/// Coefficient inner product sum_k fhat conj(ghat) = <f,g>_phys.
inline cplx inner(const SpectralField2D& f, const SpectralField2D& g) {
  check_same_grid(f.grid, g.grid, "inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    s += f.coeffs[i] * std::conj(g.coeffs[i]);
  return s;
}

inline double max_abs(const SpectralField2D& f) {
  double m = 0.0;
  for (const cplx& c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

/// Largest violation of fhat(-k) = conj(fhat(k)), relative to max|fhat|.
inline double hermitian_defect(const SpectralField2D& f) {
  const int n = f.grid.n_points;
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int j1 = f.grid.reflect(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const int j2 = f.grid.reflect(i2);
      worst = std::max(worst, std::abs(f.at(j1, j2) - std::conj(f.at(i1, i2))));
    }
  }
  const double scale = max_abs(f);
  return scale > 0.0 ? worst / scale : 0.0;
}

inline bool is_hermitian(const SpectralField2D& f, double tol = 1e-12) {
  return hermitian_defect(f) <= tol;
}

/// Project onto exact Hermitian symmetry: fhat(k) <- (fhat(k)+conj(fhat(-k)))/2.
inline SpectralField2D symmetrize(const SpectralField2D& f) {
  SpectralField2D out = f;
  const int n = f.grid.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const int j1 = f.grid.reflect(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const int j2 = f.grid.reflect(i2);
      out.at(i1, i2) = 0.5 * (f.at(i1, i2) + std::conj(f.at(j1, j2)));
    }
  }
  out.real_valued = true;
  return out;
}

}  // namespace zklb

#endif
