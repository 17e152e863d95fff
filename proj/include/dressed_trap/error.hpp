#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dressed_trap {

enum class Errc {
  invalid_parameter,
  invalid_plane,
  degenerate_frame,
  unsupported_parameter,
  scenario_validation,
  kind_mismatch,
  no_ring,
  no_double_well,
  numerical_failure,
  lost_tracking,
  not_time_dependent,
  config,
  io,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_plane: return "invalid-plane";
    case Errc::degenerate_frame: return "degenerate-frame";
    case Errc::unsupported_parameter: return "unsupported-parameter";
    case Errc::scenario_validation: return "scenario-validation";
    case Errc::kind_mismatch: return "kind-mismatch";
    case Errc::no_ring: return "no-ring";
    case Errc::no_double_well: return "no-double-well";
    case Errc::numerical_failure: return "numerical-failure";
    case Errc::lost_tracking: return "lost-tracking";
    case Errc::not_time_dependent: return "not-time-dependent";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dressed_trap
