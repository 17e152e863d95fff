#pragma once

// Named trapping geometries in the plane z = -z0, their dedicated
// closed-form potentials and the derived ring / double-well quantities.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "dressed_trap/dressed.hpp"

namespace dressed_trap {

struct TrapConfiguration {
  AtomSpecies species = AtomSpecies::rubidium87();
  QuadrupoleField quad{150.0};
  RfFieldSpec rf;
  double z0 = 10.0;  // um, the plane is z = -z0

  Position plane_point(double x, double y) const { return {x, y, -z0}; }
};

enum class ScenarioKind {
  double_well,
  ring,
  split_arcs,
  asym_split_arcs,
  asym_ring,
  rotating_well,
  oscillating_well,
};

inline constexpr std::array<ScenarioKind, 7> all_scenario_kinds = {
    ScenarioKind::double_well,     ScenarioKind::ring,      ScenarioKind::split_arcs,
    ScenarioKind::asym_split_arcs, ScenarioKind::asym_ring, ScenarioKind::rotating_well,
    ScenarioKind::oscillating_well};

constexpr std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::double_well: return "double_well";
    case ScenarioKind::ring: return "ring";
    case ScenarioKind::split_arcs: return "split_arcs";
    case ScenarioKind::asym_split_arcs: return "asym_split_arcs";
    case ScenarioKind::asym_ring: return "asym_ring";
    case ScenarioKind::rotating_well: return "rotating_well";
    case ScenarioKind::oscillating_well: return "oscillating_well";
  }
  return "unknown";
}

inline std::optional<ScenarioKind> scenario_kind_from_string(std::string_view s) {
  for (ScenarioKind k : all_scenario_kinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

constexpr bool is_time_dependent(ScenarioKind k) {
  return k == ScenarioKind::rotating_well || k == ScenarioKind::oscillating_well;
}

/// Every kind except the double well has its minimum near the resonance ring.
constexpr bool is_ring_family(ScenarioKind k) { return k != ScenarioKind::double_well; }

/// Kinds whose well position on the ring is set by the z-component phase.
constexpr bool has_tilted_ring(ScenarioKind k) {
  return k == ScenarioKind::asym_ring || is_time_dependent(k);
}

/// Circular polarization "cos(wt + pi/2)" under the cos(wt - alpha) convention.
inline constexpr double circular_alpha = -constants::pi / 2.0;

namespace detail {

inline constexpr double constraint_tolerance = 1e-12;

inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= constraint_tolerance * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline void require(bool ok, ScenarioKind k, std::string_view what) {
  if (!ok)
    fail(Errc::scenario_validation,
         std::string(to_string(k)) + " requires " + std::string(what));
}

}  // namespace detail

/// Throws scenario_validation naming the first violated constraint.
inline void validate_scenario(ScenarioKind kind, const TrapConfiguration& c) {
  require_plane(c.z0);
  c.rf.validate();
  const RfFieldSpec& rf = c.rf;
  const bool circular_phase = std::abs(rf.alpha - circular_alpha) <= detail::constraint_tolerance;
  const bool equal_xy = detail::nearly_equal(rf.Bx, rf.By);
  using detail::require;

  if (kind == ScenarioKind::rotating_well)
    require(std::holds_alternative<LinearModulation>(rf.modulation), kind, "linear phase modulation");
  else if (kind == ScenarioKind::oscillating_well)
    require(std::holds_alternative<PeriodicModulation>(rf.modulation), kind, "periodic phase modulation");
  else
    require(!is_modulated(rf.modulation), kind, "no phase modulation");

  switch (kind) {
    case ScenarioKind::double_well:
      require(rf.By == 0.0, kind, "B_y = 0");
      require(rf.Bz == 0.0, kind, "B_z = 0");
      break;
    case ScenarioKind::ring:
      require(equal_xy, kind, "B_x = B_y");
      require(rf.Bz == 0.0, kind, "B_z = 0");
      require(circular_phase, kind, "alpha = -pi/2");
      break;
    case ScenarioKind::split_arcs:
      require(!equal_xy, kind, "B_x != B_y");
      require(rf.Bz == 0.0, kind, "B_z = 0");
      require(circular_phase, kind, "alpha = -pi/2");
      break;
    case ScenarioKind::asym_split_arcs:
      require(!equal_xy, kind, "B_x != B_y");
      require(rf.Bz > 0.0, kind, "B_z > 0");
      require(circular_phase, kind, "alpha = -pi/2");
      break;
    case ScenarioKind::asym_ring:
    case ScenarioKind::rotating_well:
    case ScenarioKind::oscillating_well:
      require(equal_xy, kind, "B_x = B_y");
      require(rf.Bz > 0.0, kind, "B_z > 0");
      require(circular_phase, kind, "alpha = -pi/2");
      break;
  }
}

/// A configuration that has passed validation for its kind.
class Scenario {
 public:
  ScenarioKind kind() const { return kind_; }
  const TrapConfiguration& config() const { return config_; }

  friend Scenario make_scenario(ScenarioKind kind, TrapConfiguration config);

 private:
  Scenario(ScenarioKind kind, TrapConfiguration config)
      : kind_(kind), config_(std::move(config)) {}

  ScenarioKind kind_;
  TrapConfiguration config_;
};

inline Scenario make_scenario(ScenarioKind kind, TrapConfiguration config) {
  validate_scenario(kind, config);
  return Scenario(kind, std::move(config));
}

// ---------------------------------------------------------------------------
// Closed forms on the plane

namespace detail {

struct PlaneGeometry {
  double x, y, z0;
  double rho2, d2, d;
  // (Bx^2 x^2 + By^2 y^2) / rho^2 and (Bx^2 y^2 + By^2 x^2) / rho^2 with the
  // phi = 0 limit on the axis.
  double cos2, sin2;

  PlaneGeometry(double x_, double y_, double z0_) : x(x_), y(y_), z0(z0_) {
    rho2 = x * x + y * y;
    d2 = rho2 + 4.0 * z0 * z0;
    d = std::sqrt(d2);
    if (rho2 > 0.0) {
      cos2 = x * x / rho2;
      sin2 = y * y / rho2;
    } else {
      cos2 = 1.0;
      sin2 = 0.0;
    }
  }
};

/// Isotropic ring bracket 4z0^2/D^2 + 4z0/D + 1 = (1 + 2 z0 / D)^2.
inline double ring_factor(const PlaneGeometry& g) {
  return 4.0 * g.z0 * g.z0 / g.d2 + 4.0 * g.z0 / g.d + 1.0;
}

/// Tilted-ring bracket for equal x/y amplitudes and z phase beta.
inline double tilted_ring_bracket(const PlaneGeometry& g, double Bx, double Bz, double beta) {
  return Bx * Bx * ring_factor(g) + Bz * Bz * (g.rho2 / g.d2) -
         2.0 * Bx * Bz * (g.x * std::cos(beta) - g.y * std::sin(beta)) / g.d *
             (2.0 * g.z0 / g.d + 1.0);
}

inline double split_arc_bracket(const PlaneGeometry& g, double Bx, double By) {
  return 4.0 * g.z0 * g.z0 / g.d2 * (Bx * Bx * g.cos2 + By * By * g.sin2) +
         (Bx * Bx * g.sin2 + By * By * g.cos2) + 4.0 * Bx * By * g.z0 / g.d;
}

inline double closed_form_bracket(ScenarioKind kind, const RfFieldSpec& rf,
                                  const PlaneGeometry& g, double t) {
  const double Bx = rf.Bx, By = rf.By, Bz = rf.Bz;
  switch (kind) {
    case ScenarioKind::double_well:
      return Bx * Bx * (4.0 * g.z0 * g.z0 / g.d2 * g.cos2 + g.sin2);
    case ScenarioKind::ring:
      return Bx * Bx * ring_factor(g);
    case ScenarioKind::split_arcs:
      return split_arc_bracket(g, Bx, By);
    case ScenarioKind::asym_split_arcs: {
      const double b = rf.beta, cb = std::cos(b), sb = std::sin(b);
      return split_arc_bracket(g, Bx, By) + Bz * Bz * (g.rho2 / g.d2) +
             4.0 * By * Bz * g.y * g.z0 * sb / g.d2 - 2.0 * By * Bz * g.x * cb / g.d -
             4.0 * Bz * Bx * g.z0 * g.x * cb / g.d2 + 2.0 * Bz * Bx * g.y * sb / g.d;
    }
    case ScenarioKind::asym_ring:
      return tilted_ring_bracket(g, Bx, Bz, rf.beta);
    case ScenarioKind::rotating_well:
    case ScenarioKind::oscillating_well:
      return tilted_ring_bracket(g, Bx, Bz, rf.beta_at(t));
  }
  return 0.0;
}

}  // namespace detail

/// delta, Omega and V from the kind's dedicated in-plane formula.
inline DressedSample closed_form_sample(const Scenario& s, double x, double y, double t) {
  const TrapConfiguration& c = s.config();
  const detail::PlaneGeometry g(x, y, c.z0);
  const double delta = c.rf.omega - c.species.larmor_per_gauss() * 2.0 *
                                        c.quad.gradient_per_um() * c.z0 *
                                        std::sqrt(1.0 + g.rho2 / (4.0 * c.z0 * c.z0));
  const double bracket = detail::closed_form_bracket(s.kind(), c.rf, g, t);
  const double rabi = detail::coupling_from_bracket(c.species, bracket, c.rf.Bx + c.rf.By + c.rf.Bz);
  DressedSample out = make_sample(c.species, delta, rabi, c.rf.omega);
  out.position = c.plane_point(x, y);
  out.time = t;
  return out;
}

inline double closed_form_potential(const Scenario& s, double x, double y, double t) {
  return closed_form_sample(s, x, y, t).V_over_hbar;
}

/// Validates that `config` satisfies `kind` before evaluating.
inline double closed_form_potential(const TrapConfiguration& config, ScenarioKind kind,
                                    double x, double y, double t) {
  try {
    return closed_form_potential(make_scenario(kind, config), x, y, t);
  } catch (const Error& e) {
    if (e.code() == Errc::scenario_validation) fail(Errc::kind_mismatch, e.what());
    throw;
  }
}

/// General-path sample on the plane, for comparison with the closed forms.
inline DressedSample general_sample(const TrapConfiguration& c, double x, double y, double t) {
  return potential(c.species, c.quad, c.rf, c.plane_point(x, y), t);
}

// ---------------------------------------------------------------------------
// Derived quantities

namespace detail {

/// Exact resonance at the plane centre lands within rounding of zero.
inline double snap_radicand(double v) { return std::abs(v) <= 1e-12 ? 0.0 : v; }

}  // namespace detail

/// hbar omega / (g_F mu_B B0), B0 = 2 B_q z0.
inline double resonance_ratio(const TrapConfiguration& c) {
  require_plane(c.z0);
  const double b0 = 2.0 * c.quad.gradient_per_um() * c.z0;
  return c.rf.omega / (c.species.larmor_per_gauss() * b0);
}

/// Gradient [G/cm] at which the resonance ring shrinks onto the axis.
inline double critical_gradient(const AtomSpecies& species, double omega, double z0) {
  require_plane(z0);
  return omega / (species.larmor_per_gauss() * 2.0 * z0) * constants::um_per_cm;
}

/// 2 z0 sqrt(ratio^2 - 1), without any kind check.
inline double resonance_radius(const TrapConfiguration& c) {
  const double r = resonance_ratio(c);
  const double radicand = detail::snap_radicand(r * r - 1.0);
  if (r < 0.0 || radicand < 0.0)
    fail(Errc::no_ring, "below resonance: RF frequency under the Larmor frequency at the plane centre");
  return 2.0 * c.z0 * std::sqrt(radicand);
}

/// d = 4 z0 sqrt((hbar omega / (2 g_F mu_B z0 B_q))^2 - 1).
inline double well_separation(const Scenario& s) {
  if (s.kind() != ScenarioKind::double_well)
    fail(Errc::kind_mismatch, "well separation is defined for double_well only");
  const TrapConfiguration& c = s.config();
  const double r = c.rf.omega / (2.0 * c.species.larmor_per_gauss() * c.z0 *
                                 c.quad.gradient_per_um());
  const double radicand = detail::snap_radicand(r * r - 1.0);
  if (r < 0.0 || radicand < 0.0)
    fail(Errc::no_double_well, "below resonance: no double well in the trapping plane");
  return 4.0 * c.z0 * std::sqrt(radicand);
}

inline double ring_radius(const Scenario& s) {
  if (!is_ring_family(s.kind()))
    fail(Errc::kind_mismatch, "ring radius is undefined for double_well");
  return resonance_radius(s.config());
}

/// Analytic azimuth of the well on the ring for the tilted-ring kinds.
inline double well_azimuth(const Scenario& s, double t) {
  if (!has_tilted_ring(s.kind()))
    fail(Errc::kind_mismatch, "well azimuth requires asym_ring, rotating_well or oscillating_well");
  const RfFieldSpec& rf = s.config().rf;
  if (s.kind() == ScenarioKind::oscillating_well) return -rf.beta_at(t);
  return wrap_angle(-rf.beta_at(t));
}

}  // namespace dressed_trap
