#pragma once

#include <stdexcept>
#include <string>

namespace qed {

/// Error categories raised by the library. Each value corresponds to a
/// documented failure mode of one or more operations.
enum class errc {
  zero_service_mass,
  not_normalized,
  lattice_not_reduced,
  not_aperiodic,
  overloaded,
  degenerate_noise,
  unsupported_cv,
  window_too_short,
  grid_too_coarse,
  too_few_samples,
  empty_tail,
  overflow,
  config_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_service_mass: return "ZeroServiceMass";
    case errc::not_normalized: return "NotNormalized";
    case errc::lattice_not_reduced: return "LatticeNotReduced";
    case errc::not_aperiodic: return "NotAperiodic";
    case errc::overloaded: return "Overloaded";
    case errc::degenerate_noise: return "DegenerateNoise";
    case errc::unsupported_cv: return "UnsupportedCV";
    case errc::window_too_short: return "WindowTooShort";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::empty_tail: return "EmptyTail";
    case errc::overflow: return "Overflow";
    case errc::config_error: return "ConfigError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace qed
