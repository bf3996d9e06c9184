#ifndef ZKLB_ZKLB_HPP
#define ZKLB_ZKLB_HPP

#include "zklb/checkpoint.hpp"
#include "zklb/config.hpp"
#include "zklb/csv.hpp"
#include "zklb/diagnostics.hpp"
#include "zklb/errors.hpp"
#include "zklb/fft.hpp"
#include "zklb/field.hpp"
#include "zklb/grid.hpp"
#include "zklb/parallel.hpp"
#include "zklb/probes.hpp"
#include "zklb/rng.hpp"
#include "zklb/simulate.hpp"
#include "zklb/solver.hpp"
#include "zklb/spacetime.hpp"
#include "zklb/spectral.hpp"
#include "zklb/wave.hpp"

#endif
