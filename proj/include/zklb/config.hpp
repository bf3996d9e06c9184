#ifndef ZKLB_CONFIG_HPP
#define ZKLB_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zklb/probes.hpp"
#include "zklb/rng.hpp"
#include "zklb/simulate.hpp"
#include "zklb/solver.hpp"

namespace zklb {

struct GridConfig {
  int n = 64;
  double period = 32.0 * std::numbers::pi;
  bool dealias = true;
  GridSpec spec() const { return GridSpec{n, period, dealias}; }
  bool operator==(const GridConfig&) const = default;
};

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  int checkpoint_every = 100;
  bool operator==(const SolverConfig&) const = default;
};

/**
 * Initial-condition family. phi families: gaussian_packet (modulated by
 * (mode_x, mode_y)), single_mode, multi_mode_random. Wave families for
 * (a, b): zero, gaussian (b proportional to Lap of the bump, hence
 * mean-free), single_mode, random (b drawn mean-free). A configuration whose
 * b has a nonzero mean is rejected: such data lie outside Hhat^{-1}.
 */
struct DataConfig {
  std::string family = "gaussian_packet";
  double amplitude = 0.05;
  double width = 2.0;
  double center_x = -1.0;  // negative: period/2
  double center_y = -1.0;
  int mode_x = 1;
  int mode_y = 0;
  double kmax = 0.0;  // 0: full 2/3 band
  std::uint64_t seed = 12345;
  std::string wave_family = "zero";
  double wave_amplitude = 0.0;
  double wave_width = 2.0;
  int wave_mode_x = 1;
  int wave_mode_y = 0;
  double wave_b_amplitude = 0.0;
  bool operator==(const DataConfig&) const = default;
};

struct DiagnosticsConfig {
  std::vector<double> s_list{2.0, 4.0};
  int record_every = 10;
  bool increment = false;
  int increment_s = 2;
  double t_min_fraction = 0.1;
  bool store_history = false;

  DiagnosticsSchedule schedule() const {
    return DiagnosticsSchedule{record_every, s_list, increment, increment_s,
                               store_history, t_min_fraction};
  }
  bool operator==(const DiagnosticsConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "zklb_out";
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  SolverConfig solver;
  DataConfig data;
  DiagnosticsConfig diagnostics;
  ProbeConfig probe;
  OutputConfig output;

  void validate() const {
    grid.spec().validate();
    SplitStepConfig{solver.dt, grid.dealias, solver.checkpoint_every}.validate();
    if (!(solver.T > 0.0)) throw ConfigError("solver.T must be positive");
    DiagnosticsSchedule sched = diagnostics.schedule();
    sched.validate();
    if (diagnostics.increment_s < 2 || diagnostics.increment_s % 2 != 0)
      throw ConfigError("diagnostics.increment_s must be an even integer >= 2");
    probe.validate();
  }
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_real(const std::string& where, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("config key '" + where + "': cannot parse '" + v + "' as real");
  return x;
}

inline long long parse_int(const std::string& where, const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("config key '" + where + "': cannot parse '" + v + "' as integer");
  return x;
}

inline std::uint64_t parse_u64(const std::string& where, const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("config key '" + where + "': cannot parse '" + v + "' as seed");
  return x;
}

inline bool parse_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + where + "': cannot parse '" + v + "' as boolean");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& where, const std::string& v, Parse&& p) {
  std::vector<T> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(p(where, trim(item)));
  if (out.empty())
    throw ConfigError("config key '" + where + "': empty list");
  return out;
}

inline std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/** Parse the key = value configuration format with [section] headers. */
inline RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section != "grid" && section != "solver" && section != "data" &&
          section != "diagnostics" && section != "probe" && section != "output")
        throw ConfigError("unknown config section '" + section + "'");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    const std::string where = section.empty() ? key : section + "." + key;
    using namespace detail;

    if (section == "grid") {
      if (key == "n") cfg.grid.n = static_cast<int>(parse_int(where, value));
      else if (key == "period") cfg.grid.period = parse_real(where, value);
      else if (key == "dealias") cfg.grid.dealias = parse_bool(where, value);
      else throw ConfigError("unknown config key '" + where + "'");
    } else if (section == "solver") {
      if (key == "dt") cfg.solver.dt = parse_real(where, value);
      else if (key == "T") cfg.solver.T = parse_real(where, value);
      else if (key == "checkpoint_every")
        cfg.solver.checkpoint_every = static_cast<int>(parse_int(where, value));
      else throw ConfigError("unknown config key '" + where + "'");
    } else if (section == "data") {
      if (key == "family") cfg.data.family = value;
      else if (key == "amplitude") cfg.data.amplitude = parse_real(where, value);
      else if (key == "width") cfg.data.width = parse_real(where, value);
      else if (key == "center_x") cfg.data.center_x = parse_real(where, value);
      else if (key == "center_y") cfg.data.center_y = parse_real(where, value);
      else if (key == "mode_x") cfg.data.mode_x = static_cast<int>(parse_int(where, value));
      else if (key == "mode_y") cfg.data.mode_y = static_cast<int>(parse_int(where, value));
      else if (key == "kmax") cfg.data.kmax = parse_real(where, value);
      else if (key == "seed") cfg.data.seed = parse_u64(where, value);
      else if (key == "wave_family") cfg.data.wave_family = value;
      else if (key == "wave_amplitude") cfg.data.wave_amplitude = parse_real(where, value);
      else if (key == "wave_width") cfg.data.wave_width = parse_real(where, value);
      else if (key == "wave_mode_x")
        cfg.data.wave_mode_x = static_cast<int>(parse_int(where, value));
      else if (key == "wave_mode_y")
        cfg.data.wave_mode_y = static_cast<int>(parse_int(where, value));
      else if (key == "wave_b_amplitude")
        cfg.data.wave_b_amplitude = parse_real(where, value);
      else throw ConfigError("unknown config key '" + where + "'");
    } else if (section == "diagnostics") {
      if (key == "s_list") cfg.diagnostics.s_list = parse_list<double>(where, value, parse_real);
      else if (key == "record_every")
        cfg.diagnostics.record_every = static_cast<int>(parse_int(where, value));
      else if (key == "increment") cfg.diagnostics.increment = parse_bool(where, value);
      else if (key == "increment_s")
        cfg.diagnostics.increment_s = static_cast<int>(parse_int(where, value));
      else if (key == "t_min_fraction")
        cfg.diagnostics.t_min_fraction = parse_real(where, value);
      else if (key == "store_history")
        cfg.diagnostics.store_history = parse_bool(where, value);
      else throw ConfigError("unknown config key '" + where + "'");
    } else if (section == "probe") {
      if (key == "b") cfg.probe.b_exponent = parse_real(where, value);
      else if (key == "s1") cfg.probe.s1 = static_cast<int>(parse_int(where, value));
      else if (key == "s2") cfg.probe.s2 = static_cast<int>(parse_int(where, value));
      else if (key == "s") cfg.probe.s = static_cast<int>(parse_int(where, value));
      else if (key == "trials") cfg.probe.trials = static_cast<int>(parse_int(where, value));
      else if (key == "seed") cfg.probe.seed = parse_u64(where, value);
      else if (key == "resolutions")
        cfg.probe.resolutions = parse_list<int>(where, value, [](const std::string& w,
                                                                 const std::string& v2) {
          return static_cast<int>(parse_int(w, v2));
        });
      else if (key == "delta") cfg.probe.delta = parse_real(where, value);
      else if (key == "m_steps") cfg.probe.m_steps = static_cast<int>(parse_int(where, value));
      else if (key == "period") cfg.probe.period = parse_real(where, value);
      else if (key == "t_total") cfg.probe.t_total = parse_real(where, value);
      else if (key == "flank_fraction") cfg.probe.flank_fraction = parse_real(where, value);
      else if (key == "envelope_r") cfg.probe.envelope_r = parse_real(where, value);
      else if (key == "include_trace_term")
        cfg.probe.include_trace_term = parse_bool(where, value);
      else if (key == "swap_conjugation")
        cfg.probe.swap_conjugation = parse_bool(where, value);
      else if (key == "lemma_band_kmin")
        cfg.probe.lemma_band_kmin = parse_real(where, value);
      else throw ConfigError("unknown config key '" + where + "'");
    } else if (section == "output") {
      if (key == "directory") cfg.output.directory = value;
      else throw ConfigError("unknown config key '" + where + "'");
    } else {
      throw ConfigError("config key '" + where + "' appears before any [section]");
    }
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/** Canonical text form; writing then parsing reproduces every field. */
inline std::string write_config_text(const RunConfig& c) {
  using detail::fmt_real;
  std::ostringstream o;
  o << "[grid]\n"
    << "n = " << c.grid.n << "\n"
    << "period = " << fmt_real(c.grid.period) << "\n"
    << "dealias = " << (c.grid.dealias ? "true" : "false") << "\n\n";
  o << "[solver]\n"
    << "dt = " << fmt_real(c.solver.dt) << "\n"
    << "T = " << fmt_real(c.solver.T) << "\n"
    << "checkpoint_every = " << c.solver.checkpoint_every << "\n\n";
  o << "[data]\n"
    << "family = " << c.data.family << "\n"
    << "amplitude = " << fmt_real(c.data.amplitude) << "\n"
    << "width = " << fmt_real(c.data.width) << "\n"
    << "center_x = " << fmt_real(c.data.center_x) << "\n"
    << "center_y = " << fmt_real(c.data.center_y) << "\n"
    << "mode_x = " << c.data.mode_x << "\n"
    << "mode_y = " << c.data.mode_y << "\n"
    << "kmax = " << fmt_real(c.data.kmax) << "\n"
    << "seed = " << c.data.seed << "\n"
    << "wave_family = " << c.data.wave_family << "\n"
    << "wave_amplitude = " << fmt_real(c.data.wave_amplitude) << "\n"
    << "wave_width = " << fmt_real(c.data.wave_width) << "\n"
    << "wave_mode_x = " << c.data.wave_mode_x << "\n"
    << "wave_mode_y = " << c.data.wave_mode_y << "\n"
    << "wave_b_amplitude = " << fmt_real(c.data.wave_b_amplitude) << "\n\n";
  o << "[diagnostics]\n"
    << "s_list = ";
  for (std::size_t i = 0; i < c.diagnostics.s_list.size(); ++i)
    o << (i ? "," : "") << fmt_real(c.diagnostics.s_list[i]);
  o << "\n"
    << "record_every = " << c.diagnostics.record_every << "\n"
    << "increment = " << (c.diagnostics.increment ? "true" : "false") << "\n"
    << "increment_s = " << c.diagnostics.increment_s << "\n"
    << "t_min_fraction = " << fmt_real(c.diagnostics.t_min_fraction) << "\n"
    << "store_history = " << (c.diagnostics.store_history ? "true" : "false") << "\n\n";
  o << "[probe]\n"
    << "b = " << fmt_real(c.probe.b_exponent) << "\n"
    << "s1 = " << c.probe.s1 << "\n"
    << "s2 = " << c.probe.s2 << "\n"
    << "s = " << c.probe.s << "\n"
    << "trials = " << c.probe.trials << "\n"
    << "seed = " << c.probe.seed << "\n"
    << "resolutions = ";
  for (std::size_t i = 0; i < c.probe.resolutions.size(); ++i)
    o << (i ? "," : "") << c.probe.resolutions[i];
  o << "\n"
    << "delta = " << fmt_real(c.probe.delta) << "\n"
    << "m_steps = " << c.probe.m_steps << "\n"
    << "period = " << fmt_real(c.probe.period) << "\n"
    << "t_total = " << fmt_real(c.probe.t_total) << "\n"
    << "flank_fraction = " << fmt_real(c.probe.flank_fraction) << "\n"
    << "envelope_r = " << fmt_real(c.probe.envelope_r) << "\n"
    << "include_trace_term = " << (c.probe.include_trace_term ? "true" : "false") << "\n"
    << "swap_conjugation = " << (c.probe.swap_conjugation ? "true" : "false") << "\n"
    << "lemma_band_kmin = " << fmt_real(c.probe.lemma_band_kmin) << "\n\n";
  o << "[output]\n"
    << "directory = " << c.output.directory << "\n";
  return o.str();
}

namespace detail {

/// Periodic Gaussian bump exp(-r^2 / 2 width^2) with minimum-image distance.
inline RealField2D gaussian_bump(const GridSpec& g, double amplitude, double width,
                                 double cx, double cy) {
  if (!(width > 0.0)) throw ConfigError("data: width must be positive");
  if (cx < 0.0) cx = 0.5 * g.period;
  if (cy < 0.0) cy = 0.5 * g.period;
  RealField2D f = RealField2D::zero(g);
  const int n = g.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    double dx = g.coordinate(i1) - cx;
    dx -= g.period * std::round(dx / g.period);
    for (int i2 = 0; i2 < n; ++i2) {
      double dy = g.coordinate(i2) - cy;
      dy -= g.period * std::round(dy / g.period);
      f.values[g.index(i1, i2)] =
          amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    }
  }
  return f;
}

inline SpectralField2D laplacian_of(const SpectralField2D& f) {
  SpectralField2D out = f;
  const int n = f.grid.n_points;
  for (int i1 = 0; i1 < n; ++i1) {
    const double kx = f.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double ky = f.grid.wavenumber(i2);
      out.at(i1, i2) *= -(kx * kx + ky * ky);
    }
  }
  return out;
}

}  // namespace detail

/** Realize the configured (phi, a, b). */
inline InitialData make_initial_data(const RunConfig& cfg) {
  const GridSpec g = cfg.grid.spec();
  g.validate();
  const DataConfig& d = cfg.data;
  InitialData out{SpectralField2D::zero(g), SpectralField2D::zero(g, true),
                  SpectralField2D::zero(g, true)};

  if (d.family == "gaussian_packet") {
    RealField2D bump = detail::gaussian_bump(g, d.amplitude, d.width, d.center_x, d.center_y);
    std::vector<cplx> phys(g.size());
    const int n = g.n_points;
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        const double arg = 2.0 * std::numbers::pi *
                           (static_cast<double>(d.mode_x) * i1 +
                            static_cast<double>(d.mode_y) * i2) /
                           g.n_points;
        phys[g.index(i1, i2)] =
            bump.values[g.index(i1, i2)] * cplx(std::cos(arg), std::sin(arg));
      }
    }
    out.phi_hat = forward(g, phys);
  } else if (d.family == "single_mode") {
    const int i1 = (d.mode_x % g.n_points + g.n_points) % g.n_points;
    const int i2 = (d.mode_y % g.n_points + g.n_points) % g.n_points;
    out.phi_hat.at(i1, i2) = d.amplitude * g.period;
  } else if (d.family == "multi_mode_random") {
    out.phi_hat = random_band_field(g, d.seed, 2.0, d.amplitude, false, false, d.kmax);
  } else {
    throw ConfigError("data.family: unknown family '" + d.family + "'");
  }

  if (d.wave_family == "zero") {
    // a = b = 0
  } else if (d.wave_family == "gaussian") {
    out.a_hat = forward(detail::gaussian_bump(g, d.wave_amplitude, d.wave_width,
                                              d.center_x, d.center_y));
    if (d.wave_b_amplitude != 0.0) {
      SpectralField2D psi = forward(detail::gaussian_bump(
          g, d.wave_b_amplitude, d.wave_width, d.center_x, d.center_y));
      out.b_hat = detail::laplacian_of(psi);  // b = Lap psi: mean-free by construction
      out.b_hat.real_valued = true;
    }
  } else if (d.wave_family == "single_mode") {
    const bool zero_mode = (d.wave_mode_x == 0 && d.wave_mode_y == 0);
    if (zero_mode && d.wave_b_amplitude != 0.0)
      throw ConfigError(
          "data.wave_b_amplitude: a constant b has nonzero mean and lies outside "
          "Hhat^{-1} (no V with div V = b exists on the torus)");
    const int i1 = (d.wave_mode_x % g.n_points + g.n_points) % g.n_points;
    const int i2 = (d.wave_mode_y % g.n_points + g.n_points) % g.n_points;
    const int j1 = g.reflect(i1);
    const int j2 = g.reflect(i2);
    out.a_hat.at(i1, i2) += 0.5 * d.wave_amplitude * g.period;
    out.a_hat.at(j1, j2) += 0.5 * d.wave_amplitude * g.period;
    if (!zero_mode) {
      out.b_hat.at(i1, i2) += 0.5 * d.wave_b_amplitude * g.period;
      out.b_hat.at(j1, j2) += 0.5 * d.wave_b_amplitude * g.period;
    }
  } else if (d.wave_family == "random") {
    out.a_hat = random_band_field(g, derive_seed(d.seed, 101), 2.0, d.wave_amplitude,
                                  true, false, d.kmax);
    out.b_hat = random_band_field(g, derive_seed(d.seed, 202), 2.0, d.wave_b_amplitude,
                                  true, true, d.kmax);
  } else {
    throw ConfigError("data.wave_family: unknown family '" + d.wave_family + "'");
  }

  out.validate();
  return out;
}

}  // namespace zklb

#endif
