#ifndef ZKLB_CHECKPOINT_HPP
#define ZKLB_CHECKPOINT_HPP

// Binary checkpoint format (little-endian):
//   bytes 0..3   magic "ZKLB"
//   u32          version (currently 1)
//   u32          N (grid points per axis)
//   f64          L (period)
//   f64          t (state time)
//   3 arrays     u_hat, n_hat, ndot_hat: N*N complex as interleaved (re, im)
//                f64 pairs in row-major lattice order.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "zklb/solver.hpp"

namespace zklb {

inline constexpr char kCheckpointMagic[4] = {'Z', 'K', 'L', 'B'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const ZakharovState& st, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("save_checkpoint: cannot open " + path);
  out.write(kCheckpointMagic, 4);
  const std::uint32_t version = kCheckpointVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(st.u_hat.grid.n_points);
  const double period = st.u_hat.grid.period;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&period), sizeof period);
  out.write(reinterpret_cast<const char*>(&st.t), sizeof st.t);
  const auto dump = [&](const SpectralField2D& f) {
    out.write(reinterpret_cast<const char*>(f.coeffs.data()),
              static_cast<std::streamsize>(f.coeffs.size() * sizeof(cplx)));
  };
  dump(st.u_hat);
  dump(st.wave.n_hat);
  dump(st.wave.ndot_hat);
  if (!out) throw Error("save_checkpoint: write failed for " + path);
}

inline ZakharovState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("load_checkpoint: cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw FormatError("load_checkpoint: bad magic in " + path);
  std::uint32_t version = 0, n = 0;
  double period = 0.0, t = 0.0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&period), sizeof period);
  in.read(reinterpret_cast<char*>(&t), sizeof t);
  if (!in) throw FormatError("load_checkpoint: truncated header in " + path);
  if (version != kCheckpointVersion)
    throw FormatError("load_checkpoint: unsupported version " + std::to_string(version));
  if (n < 8 || n > 1u << 16 || !is_power_of_two(static_cast<int>(n)) || !(period > 0.0))
    throw FormatError("load_checkpoint: invalid grid header in " + path);

  const GridSpec grid{static_cast<int>(n), period};
  ZakharovState st{SpectralField2D::zero(grid), WaveState::zero(grid), t};
  const auto slurp = [&](SpectralField2D& f) {
    in.read(reinterpret_cast<char*>(f.coeffs.data()),
            static_cast<std::streamsize>(f.coeffs.size() * sizeof(cplx)));
  };
  slurp(st.u_hat);
  slurp(st.wave.n_hat);
  slurp(st.wave.ndot_hat);
  if (!in || in.gcount() != static_cast<std::streamsize>(grid.size() * sizeof(cplx)))
    throw FormatError("load_checkpoint: truncated payload in " + path);
  st.u_hat.real_valued = false;
  return st;
}

}  // namespace zklb

#endif
