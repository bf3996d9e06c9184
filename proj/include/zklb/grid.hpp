#ifndef ZKLB_GRID_HPP
#define ZKLB_GRID_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "zklb/errors.hpp"

namespace zklb {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/**
 * Uniform periodic grid on [0, period)^2 with n_points samples per axis.
 *
 * Fourier modes use the standard FFT index layout: index i maps to the
 * signed integer mode m = i for i < n/2 and m = i - n otherwise, so the
 * wavenumber is k = 2*pi*m/period with m in [-n/2, n/2).
 */
struct GridSpec {
  int n_points = 8;
  double period = 1.0;
  bool dealias_enabled = true;

  void validate() const {
    if (!is_power_of_two(n_points) || n_points < 8)
      throw ConfigError("grid: n_points must be a power of two >= 8, got " +
                        std::to_string(n_points));
    if (!(period > 0.0) || !std::isfinite(period))
      throw ConfigError("grid: period must be positive and finite");
  }

  std::size_t size() const { return static_cast<std::size_t>(n_points) * n_points; }

  /// Signed integer mode for array index i.
  int mode(int i) const { return i < n_points / 2 ? i : i - n_points; }

  /// Wavenumber 2*pi*m/period for array index i.
  double wavenumber(int i) const {
    return 2.0 * std::numbers::pi * mode(i) / period;
  }

  /// Grid coordinate of sample index i.
  double coordinate(int i) const { return period * i / n_points; }

  /// Array index of the mode -m when index i holds mode m.
  int reflect(int i) const { return i == 0 ? 0 : n_points - i; }

  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * n_points + i2;
  }

  bool operator==(const GridSpec&) const = default;
};

inline void check_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (a.n_points != b.n_points || a.period != b.period)
    throw ConfigError(std::string(what) + ": fields live on different grids");
}

}  // namespace zklb

#endif
