#pragma once

#include <stdexcept>
#include <string>

namespace kohnbound {

// Typed failure modes surfaced by the library. The CLI maps these to
// exit codes (config errors vs. numerical failures).
enum class errc {
  non_compact,
  not_strictly_psh,
  non_hermitian,
  not_symmetric,
  not_star_shaped,
  no_root,
  frame_not_tangent,
  orientation_flip,
  not_on_surface,
  degenerate_gradient,
  condition_violated,
  not_flat,
  trial_is_cr,
  no_non_cr_trial,
  empty_quadrature,
  config_error,
  parse_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw error(code, msg);
}

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::non_compact: return "NonCompact";
    case errc::not_strictly_psh: return "NotStrictlyPsh";
    case errc::non_hermitian: return "NonHermitian";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_star_shaped: return "NotStarShaped";
    case errc::no_root: return "NoRoot";
    case errc::frame_not_tangent: return "FrameNotTangent";
    case errc::orientation_flip: return "OrientationFlip";
    case errc::not_on_surface: return "NotOnSurface";
    case errc::degenerate_gradient: return "DegenerateGradient";
    case errc::condition_violated: return "ConditionViolated";
    case errc::not_flat: return "NotFlat";
    case errc::trial_is_cr: return "TrialIsCR";
    case errc::no_non_cr_trial: return "NoNonCRTrial";
    case errc::empty_quadrature: return "EmptyQuadrature";
    case errc::config_error: return "ConfigError";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace kohnbound
