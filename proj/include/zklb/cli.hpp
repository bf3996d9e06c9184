#ifndef ZKLB_CLI_HPP
#define ZKLB_CLI_HPP

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "zklb/checkpoint.hpp"
#include "zklb/config.hpp"
#include "zklb/csv.hpp"
#include "zklb/probes.hpp"
#include "zklb/simulate.hpp"

namespace zklb {

namespace cli_detail {

inline std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

inline int run_simulate(const std::string& config_path, const std::string& resume_path,
                        std::uint64_t seed, bool seed_set, const std::string& out_override) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(config_path);
  if (seed_set) cfg.data.seed = seed;
  if (!out_override.empty()) cfg.output.directory = out_override;
  cfg.validate();

  const InitialData data = make_initial_data(cfg);
  const SplitStepConfig sc{cfg.solver.dt, cfg.grid.dealias, cfg.solver.checkpoint_every};
  const DiagnosticsSchedule sched = cfg.diagnostics.schedule();

  Trajectory traj;
  if (resume_path.empty()) {
    traj = simulate(data, cfg.solver.T, sc, sched);
  } else {
    ZakharovState start = load_checkpoint(resume_path);
    traj = simulate_from(data, std::move(start), cfg.solver.T, sc, sched);
  }

  ensure_dir(cfg.output.directory);
  const std::filesystem::path dir(cfg.output.directory);
  write_diagnostics_csv((dir / "diagnostics.csv").string(), traj.records, "simulate");
  for (const ZakharovState& cp : traj.checkpoints) {
    const long long k = std::llround(cp.t / sc.dt);
    save_checkpoint(cp, (dir / ("checkpoint_step" + std::to_string(k) + ".zklb")).string());
  }
  save_checkpoint(traj.checkpoints.back(), (dir / "final.zklb").string());

  const DiagnosticsRecord& first = traj.records.front();
  const DiagnosticsRecord& last = traj.records.back();
  const double data_norm = first.h1_u + first.l2_n + first.hneg1_ndot;
  std::cout << "grid " << cfg.grid.n << "^2, period " << g6(cfg.grid.period) << ", dt "
            << g6(sc.dt) << ", steps " << traj.steps << ", horizon " << g6(traj.horizon)
            << "\n";
  std::cout << "final t = " << g6(last.t) << ": mass " << g6(last.mass) << " (drift "
            << g6(std::abs(last.mass - first.mass)) << "), hamiltonian "
            << g6(last.hamiltonian) << " (drift "
            << g6(std::abs(last.hamiltonian - first.hamiltonian)) << ")\n";
  std::cout << "local lifetime guess c*norm^-2 = "
            << g6(lifetime_estimate(data_norm, 2.0, 1.0)) << " for data norm "
            << g6(data_norm) << "\n";
  std::cout << "wrote " << (dir / "diagnostics.csv").string() << " and "
            << traj.checkpoints.size() << " checkpoints\n";
  if (traj.aborted) {
    std::cerr << "instability: " << traj.abort_message << "\n";
    return 3;
  }
  return 0;
}

inline int run_fit_growth(const std::string& csv_path, double s_requested, bool s_set,
                          double t_min, bool t_min_set) {
  const CsvTable tab = read_csv(csv_path);
  const auto t_col = tab.column("t");
  if (!t_col) throw FormatError(csv_path + ": no t column");
  std::vector<double> t;
  t.reserve(tab.rows.size());
  for (const auto& row : tab.rows) t.push_back(row[*t_col]);
  double t_max = 0.0;
  for (double v : t)
    if (std::isfinite(v) && v > t_max) t_max = v;
  if (!t_min_set) t_min = 0.1 * t_max;

  std::vector<std::pair<double, std::size_t>> cols = hs_columns(tab);
  if (s_set) {
    std::erase_if(cols, [&](const auto& c) { return c.first != s_requested; });
    if (cols.empty())
      throw FormatError(csv_path + ": no hs_" + detail::fmt_tag(s_requested) + " column");
  }
  if (cols.empty()) throw FormatError(csv_path + ": no hs_<s> columns");

  for (const auto& [s, idx] : cols) {
    std::vector<double> y;
    y.reserve(tab.rows.size());
    for (const auto& row : tab.rows) y.push_back(row[idx]);
    const GrowthFit fit = fit_power_law(t, y, t_min, s);
    std::cout << "s = " << detail::fmt_tag(s) << ": alpha = " << g6(fit.exponent_alpha)
              << ", C = " << g6(fit.prefactor_c) << ", rms log residual = "
              << g6(fit.residual) << ", points = " << fit.points_used << " (t_min = "
              << g6(fit.t_min) << ")\n";
  }
  return 0;
}

inline int run_check_duhamel(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(config_path);
  if (!out_override.empty()) cfg.output.directory = out_override;
  cfg.diagnostics.store_history = true;
  cfg.validate();

  const InitialData data = make_initial_data(cfg);
  const SplitStepConfig sc{cfg.solver.dt, cfg.grid.dealias, cfg.solver.checkpoint_every};
  const Trajectory traj = simulate(data, cfg.solver.T, sc, cfg.diagnostics.schedule());
  const std::vector<std::pair<double, double>> residuals = duhamel_check(traj);

  ensure_dir(cfg.output.directory);
  const std::filesystem::path dir(cfg.output.directory);
  write_pairs_csv((dir / "duhamel.csv").string(), residuals, "t", "residual",
                  "check-duhamel");
  double worst = 0.0;
  for (const auto& [t, r] : residuals) worst = std::max(worst, r);
  std::cout << "duhamel residual over " << residuals.size() << " checkpoints: max "
            << g6(worst) << "\n";
  std::cout << "wrote " << (dir / "duhamel.csv").string() << "\n";
  if (traj.aborted) {
    std::cerr << "instability: " << traj.abort_message << "\n";
    return 3;
  }
  return 0;
}

inline int run_iterate_bound(double c, double delta, double x0, int steps,
                             const std::string& out_dir) {
  const BoundIteration it = iterate_local_bound(c, delta, x0, steps);
  ensure_dir(out_dir);
  std::vector<std::pair<double, double>> rows;
  rows.reserve(it.sequence.size());
  for (std::size_t n = 0; n < it.sequence.size(); ++n)
    rows.emplace_back(static_cast<double>(n), it.sequence[n]);
  const std::filesystem::path dir(out_dir);
  write_pairs_csv((dir / "recurrence.csv").string(), rows, "n", "x_n", "iterate-bound");
  std::cout << "additive recurrence x += c x^(1-delta): fitted exponent "
            << g6(it.fitted_exponent) << " vs 1/delta = " << g6(1.0 / delta)
            << ", rms log residual " << g6(it.fit_residual) << "\n";
  std::cout << "multiplicative contrast x *= (1+c): rate " << g6(it.mult_rate)
            << " per step vs log(1+c) = " << g6(std::log1p(c)) << ", rms residual "
            << g6(it.mult_residual) << " over " << it.mult_steps << " steps\n";
  std::cout << "wrote " << (dir / "recurrence.csv").string() << "\n";
  return 0;
}

inline int run_probe_cmd(const std::string& variant_name, const ProbeConfig& pc,
                         const std::string& out_dir) {
  const ProbeVariant variant = probe_variant_from_name(variant_name);
  const ProbeReport report = run_probe(pc, variant);
  ensure_dir(out_dir);
  const std::filesystem::path dir(out_dir);
  for (const ResolutionReport& res : report.resolutions) {
    const std::string stem =
        "probe_" + variant_name + "_N" + std::to_string(res.n_points);
    write_probe_csv((dir / (stem + ".csv")).string(), res, "probe " + variant_name);
    write_probe_meta((dir / (stem + ".meta")).string(), report, res);
    std::cout << "N = " << res.n_points << ": " << res.rows.size() << " trials ("
              << res.discarded << " discarded), max lhs/rhs = " << g6(res.max_ratio)
              << "\n";
  }
  if (report.resolutions.size() >= 2) {
    const double lo = report.resolutions.front().max_ratio;
    const double hi = report.resolutions.back().max_ratio;
    std::cout << "resolution trend: max ratio " << g6(lo) << " -> " << g6(hi)
              << (hi <= lo * 1.5 ? " (bounded)" : " (growing)") << "\n";
  }
  std::cout << "wrote probe tables to " << out_dir << "\n";
  return 0;
}

}  // namespace cli_detail

/**
 * Entry point behind main(). Exit codes: 0 success, 1 runtime failure,
 * 2 usage or configuration error, 3 the run went unstable.
 */
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"zklb: pseudo-spectral tools for the periodic 2D Zakharov system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "zklb 1.0.0");
  app.footer(
      "Configuration file format (every key with its default):\n\n" +
      write_config_text(RunConfig{}));

  std::string config_path, resume_path, out_dir, csv_path, variant;
  std::uint64_t seed = 0;
  double s_req = 0.0, t_min = 0.0;
  double rc_c = 1.0, rc_delta = 0.25, rc_x0 = 1.0;
  int rc_steps = 400;

  CLI::App* sim = app.add_subcommand(
      "simulate", "integrate the system and write diagnostics plus checkpoints");
  sim->add_option("--config", config_path, "configuration file");
  CLI::Option* seed_opt =
      sim->add_option("--seed", seed, "override data.seed for random families");
  sim->add_option("--out", out_dir, "override output.directory");
  sim->add_option("--resume", resume_path, "checkpoint file to continue from");

  CLI::App* fit = app.add_subcommand(
      "fit-growth", "fit ||u||_{H^s} ~ C t^alpha from a diagnostics table");
  fit->add_option("--csv", csv_path, "diagnostics.csv from a simulate run")->required();
  CLI::Option* s_opt = fit->add_option("--s", s_req, "fit only this Sobolev order");
  CLI::Option* tmin_opt =
      fit->add_option("--t-min", t_min, "discard t < t-min (default: 0.1 max t)");

  CLI::App* duh = app.add_subcommand(
      "check-duhamel", "verify n against its Duhamel representation per checkpoint");
  duh->add_option("--config", config_path, "configuration file");
  duh->add_option("--out", out_dir, "override output.directory");

  CLI::App* itb = app.add_subcommand(
      "iterate-bound", "iterate the local-theory recurrence and fit its growth");
  itb->add_option("--c", rc_c, "recurrence constant (default 1)");
  itb->add_option("--delta", rc_delta, "exponent defect in (0,1] (default 0.25)");
  itb->add_option("--x0", rc_x0, "starting value (default 1)");
  itb->add_option("--steps", rc_steps, "iterations (default 400)");
  itb->add_option("--out", out_dir, "output directory (default zklb_out)");

  ProbeConfig pc;
  bool no_trace = false, swap_conj = false;
  CLI::App* prb = app.add_subcommand(
      "probe", "Monte Carlo bounds for the space-time estimates");
  prb->add_option("variant", variant, "strichartz | prop1 | prop2 | lemma")->required();
  prb->add_option("--config", config_path, "configuration file ([probe] section)");
  CLI::Option* p_trials = prb->add_option("--trials", pc.trials, "trials per resolution");
  CLI::Option* p_seed = prb->add_option("--seed", pc.seed, "base seed");
  CLI::Option* p_b = prb->add_option("--b", pc.b_exponent, "X_{s,b} time exponent");
  CLI::Option* p_s1 = prb->add_option("--s1", pc.s1, "first bilinear order");
  CLI::Option* p_s2 = prb->add_option("--s2", pc.s2, "second bilinear order");
  CLI::Option* p_s = prb->add_option("--s", pc.s, "Strichartz derivative order");
  CLI::Option* p_res = prb->add_option("--resolutions", pc.resolutions, "grid sizes")
                           ->delimiter(',');
  CLI::Option* p_m = prb->add_option("--m-steps", pc.m_steps, "time samples per window");
  CLI::Option* p_delta = prb->add_option("--delta", pc.delta, "lemma bracket defect");
  CLI::Option* p_kmin = prb->add_option("--kmin", pc.lemma_band_kmin,
                                        "lemma frequency floor");
  prb->add_flag("--no-trace", no_trace, "drop the cone trace term from the weight");
  prb->add_flag("--swap", swap_conj, "move the conjugation to the first factor");
  prb->add_option("--out", out_dir, "output directory (default zklb_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim)
      return cli_detail::run_simulate(config_path, resume_path, seed,
                                      seed_opt->count() > 0, out_dir);
    if (*fit)
      return cli_detail::run_fit_growth(csv_path, s_req, s_opt->count() > 0, t_min,
                                        tmin_opt->count() > 0);
    if (*duh) return cli_detail::run_check_duhamel(config_path, out_dir);
    if (*itb)
      return cli_detail::run_iterate_bound(rc_c, rc_delta, rc_x0, rc_steps,
                                           out_dir.empty() ? "zklb_out" : out_dir);
    if (*prb) {
      ProbeConfig merged = config_path.empty() ? ProbeConfig{} : parse_config(config_path).probe;
      if (p_trials->count()) merged.trials = pc.trials;
      if (p_seed->count()) merged.seed = pc.seed;
      if (p_b->count()) merged.b_exponent = pc.b_exponent;
      if (p_s1->count()) merged.s1 = pc.s1;
      if (p_s2->count()) merged.s2 = pc.s2;
      if (p_s->count()) merged.s = pc.s;
      if (p_res->count()) merged.resolutions = pc.resolutions;
      if (p_m->count()) merged.m_steps = pc.m_steps;
      if (p_delta->count()) merged.delta = pc.delta;
      if (p_kmin->count()) merged.lemma_band_kmin = pc.lemma_band_kmin;
      if (no_trace) merged.include_trace_term = false;
      if (swap_conj) merged.swap_conjugation = true;
      merged.validate();
      return cli_detail::run_probe_cmd(variant, merged,
                                       out_dir.empty() ? "zklb_out" : out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace zklb

#endif
