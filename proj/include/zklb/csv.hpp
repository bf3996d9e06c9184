#ifndef ZKLB_CSV_HPP
#define ZKLB_CSV_HPP

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zklb/config.hpp"
#include "zklb/probes.hpp"
#include "zklb/simulate.hpp"

namespace zklb {

inline std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline std::string fmt_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

}  // namespace detail

/**
 * Diagnostics table. One row per record; the increment columns stay empty on
 * rows where the decomposition was not evaluated. All reals use %.17g so a
 * reread reproduces the run exactly.
 */
inline void write_diagnostics_csv(const std::string& path,
                                  const std::vector<DiagnosticsRecord>& records,
                                  const std::string& command) {
  std::ofstream out = detail::open_out(path);
  out << "# zklb " << command << " " << iso_timestamp_utc() << "\n";
  out << "t,mass,hamiltonian,h1_u,l2_n,hneg1_ndot";
  if (!records.empty())
    for (const auto& [s, v] : records.front().hs_norms) out << ",hs_" << detail::fmt_tag(s);
  out << ",I_total,I1,I2,I3\n";
  using detail::fmt_real;
  for (const DiagnosticsRecord& r : records) {
    out << fmt_real(r.t) << ',' << fmt_real(r.mass) << ',' << fmt_real(r.hamiltonian) << ','
        << fmt_real(r.h1_u) << ',' << fmt_real(r.l2_n) << ',' << fmt_real(r.hneg1_ndot);
    for (const auto& [s, v] : r.hs_norms) out << ',' << fmt_real(v);
    if (r.has_increment)
      out << ',' << fmt_real(r.I_total) << ',' << fmt_real(r.I1) << ',' << fmt_real(r.I2)
          << ',' << fmt_real(r.I3);
    else
      out << ",,,,";
    out << '\n';
  }
  if (!out) throw Error("short write to " + path);
}

inline void write_pairs_csv(const std::string& path,
                            const std::vector<std::pair<double, double>>& rows,
                            const std::string& col_a, const std::string& col_b,
                            const std::string& command) {
  std::ofstream out = detail::open_out(path);
  out << "# zklb " << command << " " << iso_timestamp_utc() << "\n";
  out << col_a << ',' << col_b << '\n';
  for (const auto& [a, b] : rows)
    out << detail::fmt_real(a) << ',' << detail::fmt_real(b) << '\n';
  if (!out) throw Error("short write to " + path);
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // empty cells read as NaN

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    return std::nullopt;
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  CsvTable tab;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (!have_header) {
      tab.columns = cells;
      have_header = true;
      continue;
    }
    std::vector<double> row(tab.columns.size(),
                            std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < cells.size() && i < row.size(); ++i) {
      const std::string v = detail::trim(cells[i]);
      if (v.empty()) continue;
      char* end = nullptr;
      row[i] = std::strtod(v.c_str(), &end);
      if (end != v.c_str() + v.size())
        throw FormatError(path + ": cannot parse cell '" + v + "'");
    }
    tab.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError(path + ": no header row");
  return tab;
}

/** Locate hs_<s> columns; returns (s, column index) pairs in file order. */
inline std::vector<std::pair<double, std::size_t>> hs_columns(const CsvTable& tab) {
  std::vector<std::pair<double, std::size_t>> out;
  for (std::size_t i = 0; i < tab.columns.size(); ++i) {
    const std::string& c = tab.columns[i];
    if (c.rfind("hs_", 0) == 0) {
      char* end = nullptr;
      const double s = std::strtod(c.c_str() + 3, &end);
      if (end == c.c_str() + c.size()) out.emplace_back(s, i);
    }
  }
  return out;
}

inline void write_probe_csv(const std::string& csv_path, const ResolutionReport& res,
                            const std::string& command) {
  std::ofstream out = detail::open_out(csv_path);
  out << "# zklb " << command << " " << iso_timestamp_utc() << "\n";
  out << "trial,lhs,rhs,ratio\n";
  for (const ProbeTrialRow& r : res.rows)
    out << r.trial << ',' << detail::fmt_real(r.lhs) << ',' << detail::fmt_real(r.rhs)
        << ',' << detail::fmt_real(r.ratio) << '\n';
  if (!out) throw Error("short write to " + csv_path);
}

inline void write_probe_meta(const std::string& meta_path, const ProbeReport& report,
                             const ResolutionReport& res) {
  std::ofstream out = detail::open_out(meta_path);
  using detail::fmt_real;
  out << "variant = " << probe_variant_name(report.variant) << "\n"
      << "N = " << res.n_points << "\n"
      << "M = " << report.config.m_steps << "\n"
      << "seed = " << report.config.seed << "\n"
      << "b = " << fmt_real(report.config.b_exponent) << "\n"
      << "s1 = " << report.config.s1 << "\n"
      << "s2 = " << report.config.s2 << "\n"
      << "s = " << report.config.s << "\n"
      << "delta = " << fmt_real(report.config.delta) << "\n"
      << "trials = " << report.config.trials << "\n"
      << "discarded = " << res.discarded << "\n"
      << "period = " << fmt_real(report.config.period) << "\n"
      << "t_total = " << fmt_real(report.config.t_total) << "\n"
      << "flank_fraction = " << fmt_real(report.config.flank_fraction) << "\n"
      << "envelope_r = " << fmt_real(report.config.envelope_r) << "\n"
      << "include_trace_term = " << (report.config.include_trace_term ? "true" : "false")
      << "\n"
      << "swap_conjugation = " << (report.config.swap_conjugation ? "true" : "false") << "\n"
      << "lemma_band_kmin = " << fmt_real(report.config.lemma_band_kmin) << "\n"
      << "max_ratio = " << fmt_real(res.max_ratio) << "\n";
  if (!out) throw Error("short write to " + meta_path);
}

}  // namespace zklb

#endif
