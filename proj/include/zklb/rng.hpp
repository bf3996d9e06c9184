#ifndef ZKLB_RNG_HPP
#define ZKLB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "zklb/field.hpp"

namespace zklb {

/// splitmix64 mixing step, used to derive independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ull + 1));
}

/**
 * Deterministic Gaussian source. Draws are produced by a fixed Box-Muller
 * recipe over mt19937_64 so that a given seed yields the same sequence on
 * every platform (std::normal_distribution makes no such guarantee).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx cgauss() { return {gaussian(), gaussian()}; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/**
 * Random band-limited field: independent complex Gaussian coefficients with
 * isotropic envelope (1+|k|^2)^{-r/2} on the 2/3 band, zero outside. With
 * hermitian = true the result is symmetrized (real-valued samples); with
 * mean_free = true the k = 0 mode is zeroed.
 */
inline SpectralField2D random_band_field(const GridSpec& g, std::uint64_t seed,
                                         double envelope_r = 2.0,
                                         double amplitude = 1.0,
                                         bool hermitian = false,
                                         bool mean_free = false,
                                         double kmax = 0.0) {
  g.validate();
  Rng rng(seed);
  SpectralField2D f = SpectralField2D::zero(g);
  const int n = g.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const int m1 = std::abs(g.mode(i1));
    const double kx = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const int m2 = std::abs(g.mode(i2));
      const double ky = g.wavenumber(i2);
      const cplx z = rng.cgauss();  // always draw: band choice must not shift the stream
      if (3 * std::max(m1, m2) > n) continue;
      const double k2 = kx * kx + ky * ky;
      if (kmax > 0.0 && k2 > kmax * kmax) continue;
      f.at(i1, i2) = amplitude * std::pow(1.0 + k2, -0.5 * envelope_r) * z;
    }
  }
  if (mean_free) f.coeffs[0] = 0.0;
  if (hermitian) f = symmetrize(f);
  return f;
}

}  // namespace zklb

#endif
