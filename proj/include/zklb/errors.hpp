#ifndef ZKLB_ERRORS_HPP
#define ZKLB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zklb {

/** Base class for all library errors. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad grid, shape mismatch, unknown config key.
struct ConfigError : Error { using Error::Error; };

/// Invalid argument to an operation (nonfinite dt, history too short, ...).
struct ArgumentError : Error { using Error::Error; };

/// B^sigma with sigma < 0 applied to a field with a nonzero mean mode.
struct SingularModeError : Error { using Error::Error; };

/// Data required to be mean-free (Hhat^{-1} membership) has a nonzero mean.
struct MeanFreeError : Error { using Error::Error; };

/// Increment decomposition requires an even integer order s >= 2.
struct UnsupportedOrderError : Error { using Error::Error; };

/// Too few samples to fit (growth fits need at least 4 usable records).
struct InsufficientDataError : Error { using Error::Error; };

/// Probe called outside its hypotheses (s1 > s2).
struct HypothesisError : Error { using Error::Error; };

/// Operation contract violated (e.g. space-time norm of an unwindowed field).
struct ContractError : Error { using Error::Error; };

/// Malformed file: bad magic, version, or truncation.
struct FormatError : Error { using Error::Error; };

}  // namespace zklb

#endif
