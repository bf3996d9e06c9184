#ifndef ZKLB_PROBES_HPP
#define ZKLB_PROBES_HPP

// Numerical ratio probes for the space-time estimates: the L4 Strichartz
// bound, the two bilinear smoothing propositions, and the trilinear
// wave-Schrodinger lemma. None of these certify a constant; they measure
// whether the empirical max of LHS/RHS stays stable as resolution grows,
// which is the observable consequence of boundedness on a discrete lattice.

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "zklb/parallel.hpp"
#include "zklb/rng.hpp"
#include "zklb/spacetime.hpp"
#include "zklb/wave.hpp"

namespace zklb {

enum class ProbeVariant { strichartz, prop1, prop2, lemma };

inline const char* probe_variant_name(ProbeVariant v) {
  switch (v) {
    case ProbeVariant::strichartz: return "strichartz";
    case ProbeVariant::prop1: return "prop1";
    case ProbeVariant::prop2: return "prop2";
    case ProbeVariant::lemma: return "lemma";
  }
  return "?";
}

inline ProbeVariant probe_variant_from_name(const std::string& s) {
  if (s == "strichartz") return ProbeVariant::strichartz;
  if (s == "prop1") return ProbeVariant::prop1;
  if (s == "prop2") return ProbeVariant::prop2;
  if (s == "lemma") return ProbeVariant::lemma;
  throw ArgumentError("unknown probe variant: " + s);
}

struct ProbeConfig {
  double b_exponent = 0.55;  // the "1/2+" exponent
  int s1 = 0;
  int s2 = 1;
  int s = 0;                 // derivative order of the Strichartz probe
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<int> resolutions{32, 64};
  double delta = 0.05;       // the lemma's "fixed small delta"
  int m_steps = 32;
  double period = 2.0 * std::numbers::pi;
  double t_total = 4.0;
  double flank_fraction = 0.1;
  double envelope_r = 2.0;
  bool include_trace_term = true;
  bool swap_conjugation = false;
  double lemma_band_kmin = 10.0;

  void validate() const {
    if (!(b_exponent > 0.5))
      throw ConfigError("probe: b_exponent must exceed 1/2");
    if (s1 > s2) throw HypothesisError("probe: requires s1 <= s2");
    if (s1 < 0 || s2 < 1)
      throw HypothesisError("probe: requires s1 >= 0 and s2 >= 1");
    if (trials < 1) throw ConfigError("probe: trials must be >= 1");
    if (resolutions.empty()) throw ConfigError("probe: resolutions must be nonempty");
    if (!is_power_of_two(m_steps) || m_steps < 8)
      throw ConfigError("probe: m_steps must be a power of two >= 8");
    if (!(delta > 0.0)) throw ConfigError("probe: delta must be positive");
    if (!(lemma_band_kmin >= 0.0)) throw ConfigError("probe: band kmin must be >= 0");
    GridSpec{resolutions.front(), period}.validate();
    TimeWindow{t_total, flank_fraction}.validate();
  }

  TimeWindow window() const { return TimeWindow{t_total, flank_fraction}; }

  bool operator==(const ProbeConfig&) const = default;
};

struct ProbeTrialRow {
  int trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct ResolutionReport {
  int n_points = 0;
  std::vector<ProbeTrialRow> rows;  // valid trials only, ordered by trial index
  int discarded = 0;                // zero-RHS trials
  double max_ratio = 0.0;
};

struct ProbeReport {
  ProbeVariant variant = ProbeVariant::strichartz;
  ProbeConfig config;
  std::vector<ResolutionReport> resolutions;

  const ResolutionReport& at_resolution(int n) const {
    for (const ResolutionReport& r : resolutions)
      if (r.n_points == n) return r;
    throw ArgumentError("probe report: no such resolution");
  }
};

namespace detail {

/// Random band-limited space-time coefficients (2/3 band in k and lambda,
/// isotropic spatial envelope), returned as a windowed physical field.
inline SpaceTimeField random_st_field(const GridSpec& g, const TimeWindow& w,
                                      int m_steps, std::uint64_t seed,
                                      double envelope_r) {
  Rng rng(seed);
  std::vector<cplx> coeffs(g.size() * static_cast<std::size_t>(m_steps));
  const int n = g.n_points;
  SpaceTimeField meta = SpaceTimeField::zero(g, w.t_win(), m_steps);
  for (int it = 0; it < m_steps; ++it) {
    const int jm = std::abs(meta.lambda_mode(it));
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = std::abs(g.mode(i1));
      const double kx = g.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const int m2 = std::abs(g.mode(i2));
        const double ky = g.wavenumber(i2);
        const cplx z = rng.cgauss();
        if (3 * std::max(m1, m2) > n || 3 * jm > m_steps) continue;
        const double k2 = kx * kx + ky * ky;
        coeffs[meta.index(it, i1, i2)] = std::pow(1.0 + k2, -0.5 * envelope_r) * z;
      }
    }
  }
  return apply_window(st_from_coeffs(g, w.t_win(), m_steps, coeffs), w);
}

/// Linear interpolation of a per-time-slot magnitude profile to a real
/// frequency lambda_star; contributions outside the lattice are dropped.
inline double interp_lambda(const std::vector<double>& mag, int m_steps,
                            double t_window, double lambda_star) {
  const double x = lambda_star * t_window / (2.0 * std::numbers::pi);
  const double j0 = std::floor(x);
  const double frac = x - j0;
  double out = 0.0;
  const auto add = [&](double j, double weight) {
    if (j < -m_steps / 2 || j > m_steps / 2 - 1) return;
    const int slot = j >= 0 ? static_cast<int>(j) : static_cast<int>(j) + m_steps;
    out += weight * mag[static_cast<std::size_t>(slot)];
  };
  add(j0, 1.0 - frac);
  add(j0 + 1.0, frac);
  return out;
}

/// X_{s,b} norm evaluated directly on a coefficient array.
inline double xsb_from_coeffs(const SpaceTimeField& meta,
                              const std::vector<cplx>& coeffs, double s, double b) {
  const int n = meta.grid.n_points;
  double acc = 0.0;
  for (int it = 0; it < meta.m_steps; ++it) {
    const double lambda = meta.lambda_of(it);
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = meta.grid.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = meta.grid.wavenumber(i2);
        const double k2 = kx * kx + ky * ky;
        acc += std::pow(1.0 + k2, s) * std::pow(1.0 + std::abs(lambda + k2), 2.0 * b) *
               std::norm(coeffs[meta.index(it, i1, i2)]);
      }
    }
  }
  return std::sqrt(acc);
}

/// |k|^s multiplier on space-time coefficients.
inline std::vector<cplx> st_apply_B(const SpaceTimeField& meta,
                                    std::vector<cplx> coeffs, int s) {
  if (s == 0) return coeffs;
  const int n = meta.grid.n_points;
  for (int it = 0; it < meta.m_steps; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = meta.grid.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = meta.grid.wavenumber(i2);
        const double kk = std::sqrt(kx * kx + ky * ky);
        coeffs[meta.index(it, i1, i2)] *= std::pow(kk, s);
      }
    }
  }
  return coeffs;
}

}  // namespace detail

/**
 * LHS/RHS of the bilinear smoothing estimates. The LHS is the weighted
 * coefficient L2 norm of the product B^{s1}u1 * conj(B^{s2}u2) (conjugation
 * moved to u1 when swap_conjugation is set): each coefficient magnitude,
 * plus the on-cone trace interpolated to the nearest cone when enabled, is
 * scaled by cone_weight^alpha with alpha = 1/2 (prop1) or 1 (prop2). The
 * RHS is ||u1||_{X_{s1+1,b}} times ||u2||_{X_{s2-1/2,b}} (prop1) or
 * ||u2||_{X_{s2,b}} (prop2).
 */
inline ProbeTrialRow bilinear_probe(const SpaceTimeField& u1, const SpaceTimeField& u2,
                                    int s1, int s2, ProbeVariant variant,
                                    const ProbeConfig& cfg) {
  if (variant != ProbeVariant::prop1 && variant != ProbeVariant::prop2)
    throw ArgumentError("bilinear_probe: variant must be prop1 or prop2");
  if (s1 > s2) throw HypothesisError("bilinear_probe: requires s1 <= s2");
  if (s1 < 0 || s2 < 1)
    throw HypothesisError("bilinear_probe: requires s1 >= 0 and s2 >= 1");
  if (!u1.windowed || !u2.windowed)
    throw ContractError("bilinear_probe: fields must be windowed");
  check_same_grid(u1.grid, u2.grid, "bilinear_probe");
  if (u1.m_steps != u2.m_steps || std::abs(u1.t_window - u2.t_window) > 1e-12)
    throw ConfigError("bilinear_probe: fields live on different time lattices");

  const std::vector<cplx> c1 = st_forward(u1);
  const std::vector<cplx> c2 = st_forward(u2);

  const SpaceTimeField& meta = u1;
  const SpaceTimeField v1 = st_from_coeffs(u1.grid, u1.t_window, u1.m_steps,
                                           detail::st_apply_B(meta, c1, s1), true);
  const SpaceTimeField v2 = st_from_coeffs(u1.grid, u1.t_window, u1.m_steps,
                                           detail::st_apply_B(meta, c2, s2), true);

  SpaceTimeField prod = SpaceTimeField::zero(u1.grid, u1.t_window, u1.m_steps);
  prod.windowed = true;
  for (std::size_t i = 0; i < prod.samples.size(); ++i)
    prod.samples[i] = cfg.swap_conjugation ? std::conj(v1.samples[i]) * v2.samples[i]
                                           : v1.samples[i] * std::conj(v2.samples[i]);
  const std::vector<cplx> p = st_forward(prod);

  const double alpha = variant == ProbeVariant::prop1 ? 0.5 : 1.0;
  const ConeWeightSpec wspec{alpha, cfg.include_trace_term};
  const int n = meta.grid.n_points;
  const int m = meta.m_steps;

  double acc = 0.0;
  std::vector<double> profile(static_cast<std::size_t>(m));
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = meta.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = meta.grid.wavenumber(i2);
      const double kabs = std::sqrt(kx * kx + ky * ky);
      for (int it = 0; it < m; ++it)
        profile[static_cast<std::size_t>(it)] = std::abs(p[meta.index(it, i1, i2)]);
      const double trace_plus =
          detail::interp_lambda(profile, m, meta.t_window, kabs);
      const double trace_minus =
          detail::interp_lambda(profile, m, meta.t_window, -kabs);
      for (int it = 0; it < m; ++it) {
        const double lambda = meta.lambda_of(it);
        const double w = cone_weight(kx, ky, lambda, wspec);
        double mag = profile[static_cast<std::size_t>(it)];
        if (cfg.include_trace_term) {
          // nearest cone: the trace lives where the weight denominator is small
          mag += (std::abs(lambda - kabs) <= std::abs(lambda + kabs)) ? trace_plus
                                                                      : trace_minus;
        }
        const double term = w * mag;
        acc += term * term;
      }
    }
  }
  const double lhs = std::sqrt(acc);

  const double b = cfg.b_exponent;
  const double rhs = detail::xsb_from_coeffs(meta, c1, s1 + 1.0, b) *
                     detail::xsb_from_coeffs(
                         meta, c2, variant == ProbeVariant::prop1 ? s2 - 0.5 : s2, b);
  ProbeTrialRow row;
  row.lhs = lhs;
  row.rhs = rhs;
  row.ratio = rhs > 1e-12 ? lhs / rhs : 0.0;
  return row;
}

namespace detail {

/// Nonnegative, L2-normalized coefficient array supported on the 2/3 band
/// with |k| >= kmin. Returns an all-zero array when the band is empty.
inline std::vector<double> lemma_array(const SpaceTimeField& meta, std::uint64_t seed,
                                       double kmin) {
  Rng rng(seed);
  const GridSpec& g = meta.grid;
  const int n = g.n_points;
  const int m = meta.m_steps;
  std::vector<double> a(g.size() * static_cast<std::size_t>(m));
  double norm2 = 0.0;
  for (int it = 0; it < m; ++it) {
    const int jm = std::abs(meta.lambda_mode(it));
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = std::abs(g.mode(i1));
      const double kx = g.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const int m2 = std::abs(g.mode(i2));
        const double ky = g.wavenumber(i2);
        const double draw = std::abs(rng.gaussian());
        if (3 * std::max(m1, m2) > n || 3 * jm > m) continue;
        if (kx * kx + ky * ky < kmin * kmin) continue;
        a[meta.index(it, i1, i2)] = draw;
        norm2 += draw * draw;
      }
    }
  }
  if (norm2 > 0.0)
    for (double& v : a) v /= std::sqrt(norm2);
  return a;
}

}  // namespace detail

/**
 * The weighted factors of the trilinear lemma, as coefficient arrays:
 *   Dhat = (1+|k|^2)^{-delta/2} d / (1 + dist_to_cone)^{b},
 *   Chat = (1+|k|^2)^{-delta/2} c1 / (1 + dist_to_parabola)^{b},
 * with nearest-sign distances min(|lambda -+ |k||) and min(|lambda -+ |k|^2|).
 */
inline std::vector<cplx> lemma_wave_factor(const SpaceTimeField& meta,
                                           const std::vector<double>& d, double delta,
                                           double b) {
  const int n = meta.grid.n_points;
  std::vector<cplx> out(d.size());
  for (int it = 0; it < meta.m_steps; ++it) {
    const double lambda = meta.lambda_of(it);
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = meta.grid.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = meta.grid.wavenumber(i2);
        const double kabs = std::sqrt(kx * kx + ky * ky);
        const std::size_t idx = meta.index(it, i1, i2);
        out[idx] = std::pow(1.0 + kabs * kabs, -0.5 * delta) * d[idx] /
                   std::pow(1.0 + cone_distance(kabs, lambda), b);
      }
    }
  }
  return out;
}

inline std::vector<cplx> lemma_parabola_factor(const SpaceTimeField& meta,
                                               const std::vector<double>& c1,
                                               double delta, double b) {
  const int n = meta.grid.n_points;
  std::vector<cplx> out(c1.size());
  for (int it = 0; it < meta.m_steps; ++it) {
    const double lambda = meta.lambda_of(it);
    for (int i1 = 0; i1 < n; ++i1) {
      const double kx = meta.grid.wavenumber(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const double ky = meta.grid.wavenumber(i2);
        const double k2 = kx * kx + ky * ky;
        const double dist = std::min(std::abs(lambda - k2), std::abs(lambda + k2));
        const std::size_t idx = meta.index(it, i1, i2);
        out[idx] = std::pow(1.0 + k2, -0.5 * delta) * c1[idx] / std::pow(1.0 + dist, b);
      }
    }
  }
  return out;
}

/**
 * Convolution pairing <f, D*C> evaluated by pointwise multiplication in
 * physical space-time. On this lattice the transform of D*C (as physical
 * samples) is the plain coefficient convolution divided by L*sqrt(T_win),
 * so the pairing is L*sqrt(T_win) * sum f * transform(D.C).
 */
inline double lemma_pairing(const SpaceTimeField& meta, const std::vector<double>& f,
                            const std::vector<cplx>& Dhat,
                            const std::vector<cplx>& Chat) {
  const SpaceTimeField D =
      st_from_coeffs(meta.grid, meta.t_window, meta.m_steps, Dhat, true);
  const SpaceTimeField C =
      st_from_coeffs(meta.grid, meta.t_window, meta.m_steps, Chat, true);
  SpaceTimeField prod = SpaceTimeField::zero(meta.grid, meta.t_window, meta.m_steps);
  for (std::size_t i = 0; i < prod.samples.size(); ++i)
    prod.samples[i] = D.samples[i] * C.samples[i];
  const std::vector<cplx> conv = st_forward(prod);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < conv.size(); ++i) acc += f[i] * conv[i];
  return (meta.grid.period * std::sqrt(meta.t_window) * acc).real();
}

namespace detail {

template <typename TrialFn>
ResolutionReport run_trials(int n_points, int trials, TrialFn&& fn) {
  ResolutionReport rep;
  rep.n_points = n_points;
  std::vector<ProbeTrialRow> all(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int t) { all[static_cast<std::size_t>(t)] = fn(t); });
  for (int t = 0; t < trials; ++t) {
    ProbeTrialRow row = all[static_cast<std::size_t>(t)];
    row.trial = t;
    if (row.rhs < 1e-12) {
      ++rep.discarded;
      continue;
    }
    rep.rows.push_back(row);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
  }
  return rep;
}

}  // namespace detail

/**
 * L4 Strichartz probe: ||B^s u||_{L4_xt} vs ||u||_{X_{s,b}}. Even trials
 * draw random band-limited space-time fields; odd trials draw windowed free
 * Schrodinger waves (the extremal class), with the free data capped to
 * |k|^2 <= 0.4 lambda_max so the paraboloid stays resolved on the lambda
 * lattice at every resolution.
 */
inline ProbeReport run_strichartz_probe(const ProbeConfig& cfg) {
  cfg.validate();
  ProbeReport report;
  report.variant = ProbeVariant::strichartz;
  report.config = cfg;
  const TimeWindow w = cfg.window();
  for (int n_points : cfg.resolutions) {
    const GridSpec g{n_points, cfg.period};
    const double lambda_max = std::numbers::pi * cfg.m_steps / w.t_win();
    const double kfree = std::sqrt(0.4 * lambda_max);
    report.resolutions.push_back(detail::run_trials(
        n_points, cfg.trials, [&](int trial) -> ProbeTrialRow {
          const std::uint64_t s =
              derive_seed(cfg.seed, (static_cast<std::uint64_t>(n_points) << 32) |
                                        static_cast<std::uint64_t>(trial));
          SpaceTimeField u =
              (trial % 2 == 0)
                  ? detail::random_st_field(g, w, cfg.m_steps, s, cfg.envelope_r)
                  : free_solution(random_band_field(g, s, cfg.envelope_r, 1.0, false,
                                                    false, kfree),
                                  w, cfg.m_steps);
          ProbeTrialRow row;
          row.rhs = xsb_norm(u, static_cast<double>(cfg.s), cfg.b_exponent);
          if (cfg.s != 0) {
            u = st_from_coeffs(u.grid, u.t_window, u.m_steps,
                               detail::st_apply_B(u, st_forward(u), cfg.s), true);
          }
          row.lhs = st_l4_norm(u);
          row.ratio = row.rhs > 1e-12 ? row.lhs / row.rhs : 0.0;
          return row;
        }));
  }
  return report;
}

/// Bilinear probe driver: independent random u1, u2 per trial.
inline ProbeReport run_bilinear_probe(const ProbeConfig& cfg, ProbeVariant variant) {
  cfg.validate();
  ProbeReport report;
  report.variant = variant;
  report.config = cfg;
  const TimeWindow w = cfg.window();
  for (int n_points : cfg.resolutions) {
    const GridSpec g{n_points, cfg.period};
    report.resolutions.push_back(detail::run_trials(
        n_points, cfg.trials, [&](int trial) -> ProbeTrialRow {
          const std::uint64_t base = (static_cast<std::uint64_t>(n_points) << 32) |
                                     (static_cast<std::uint64_t>(trial) << 1);
          const SpaceTimeField u1 = detail::random_st_field(
              g, w, cfg.m_steps, derive_seed(cfg.seed, base), cfg.envelope_r);
          const SpaceTimeField u2 = detail::random_st_field(
              g, w, cfg.m_steps, derive_seed(cfg.seed, base | 1), cfg.envelope_r);
          return bilinear_probe(u1, u2, cfg.s1, cfg.s2, variant, cfg);
        }));
  }
  return report;
}

/// Trilinear lemma probe driver.
inline ProbeReport run_lemma_probe(const ProbeConfig& cfg) {
  cfg.validate();
  ProbeReport report;
  report.variant = ProbeVariant::lemma;
  report.config = cfg;
  const TimeWindow w = cfg.window();
  for (int n_points : cfg.resolutions) {
    const GridSpec g{n_points, cfg.period};
    const SpaceTimeField meta = SpaceTimeField::zero(g, w.t_win(), cfg.m_steps);
    report.resolutions.push_back(detail::run_trials(
        n_points, cfg.trials, [&](int trial) -> ProbeTrialRow {
          const std::uint64_t base = (static_cast<std::uint64_t>(n_points) << 32) |
                                     (static_cast<std::uint64_t>(trial) * 3);
          const std::vector<double> f =
              detail::lemma_array(meta, derive_seed(cfg.seed, base), 0.0);
          const std::vector<double> d =
              detail::lemma_array(meta, derive_seed(cfg.seed, base + 1),
                                  cfg.lemma_band_kmin);
          const std::vector<double> c1 =
              detail::lemma_array(meta, derive_seed(cfg.seed, base + 2),
                                  cfg.lemma_band_kmin);
          const auto nrm = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
          };
          ProbeTrialRow row;
          row.rhs = nrm(f) * nrm(d) * nrm(c1);
          if (row.rhs < 1e-12) return row;
          row.lhs = lemma_pairing(
              meta, f, lemma_wave_factor(meta, d, cfg.delta, cfg.b_exponent),
              lemma_parabola_factor(meta, c1, cfg.delta, cfg.b_exponent));
          row.ratio = row.lhs / row.rhs;
          return row;
        }));
  }
  return report;
}

inline ProbeReport run_probe(const ProbeConfig& cfg, ProbeVariant variant) {
  switch (variant) {
    case ProbeVariant::strichartz: return run_strichartz_probe(cfg);
    case ProbeVariant::prop1: return run_bilinear_probe(cfg, ProbeVariant::prop1);
    case ProbeVariant::prop2: return run_bilinear_probe(cfg, ProbeVariant::prop2);
    case ProbeVariant::lemma: return run_lemma_probe(cfg);
  }
  throw ArgumentError("run_probe: unknown variant");
}

}  // namespace zklb

#endif
