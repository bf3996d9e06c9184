#ifndef ZKLB_FFT_HPP
#define ZKLB_FFT_HPP

// Thin wrapper over FFTW3 complex-to-complex transforms. Plans are cached by
// (rank, dims, sign) and created under a mutex; execution uses the new-array
// interface, which is thread safe. Transforms here are raw (unnormalized);
// analysis-friendly normalizations live in spectral.hpp and spacetime.hpp.

#include <fftw3.h>

#include <array>
#include <complex>
#include <map>
#include <mutex>

namespace zklb {

using cplx = std::complex<double>;

namespace fft {

struct PlanKey {
  int rank = 0;
  std::array<int, 3> dims{};
  int sign = 0;
  auto operator<=>(const PlanKey&) const = default;
};

inline fftw_plan acquire_plan(const PlanKey& key) {
  static std::map<PlanKey, fftw_plan> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t total = 1;
  for (int r = 0; r < key.rank; ++r) total *= static_cast<std::size_t>(key.dims[r]);
  fftw_complex* a = fftw_alloc_complex(total);
  fftw_complex* b = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(key.rank, key.dims.data(), a, b, key.sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  cache.emplace(key, plan);
  return plan;
}

inline void execute(int rank, const std::array<int, 3>& dims, const cplx* in,
                    cplx* out, int sign) {
  fftw_plan plan = acquire_plan({rank, dims, sign});
  // c2c out-of-place transforms never modify the input array.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

inline void forward2d(int n, const cplx* in, cplx* out) {
  execute(2, {n, n, 0}, in, out, FFTW_FORWARD);
}

inline void backward2d(int n, const cplx* in, cplx* out) {
  execute(2, {n, n, 0}, in, out, FFTW_BACKWARD);
}

inline void forward3d(int m, int n, const cplx* in, cplx* out) {
  execute(3, {m, n, n}, in, out, FFTW_FORWARD);
}

inline void backward3d(int m, int n, const cplx* in, cplx* out) {
  execute(3, {m, n, n}, in, out, FFTW_BACKWARD);
}

}  // namespace fft
}  // namespace zklb

#endif
