#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dressed_trap.hpp"

namespace dtk_test {

using namespace dressed_trap;

inline constexpr double two_pi = constants::two_pi;
inline constexpr double pi = constants::pi;

// Reference values from tests/oracle/oracle.py.
inline constexpr double ring_radius_um = 141.48892251045763;
inline constexpr double well_separation_um = 282.97784502091525;
inline constexpr double critical_gradient_G_per_cm = 1071.7160209756262;
inline constexpr double ring_bracket_at_R = 1.2995143874100026;  // per Bx^2
inline constexpr double origin_detuning_Hz = 1290056.325;
inline constexpr double ring_V_at_R_MHz = 0.5584317809350087;
inline constexpr double ring_true_minimum_um = 142.09738852305907;
inline constexpr double double_well_minimum_um = 141.5641839764567;

inline double omega_MHz(double f) { return two_pi * f * 1e6; }

inline TrapConfiguration base_config(double Bx, double By = 0.0, double Bz = 0.0,
                                     double f_MHz = 1.5) {
  TrapConfiguration c;
  c.species = AtomSpecies::rubidium87();
  c.quad = QuadrupoleField(150.0);
  c.z0 = 10.0;
  c.rf.Bx = Bx;
  c.rf.By = By;
  c.rf.Bz = Bz;
  c.rf.alpha = circular_alpha;
  c.rf.omega = omega_MHz(f_MHz);
  return c;
}

inline Scenario double_well() {
  TrapConfiguration c = base_config(0.7);
  c.rf.alpha = 0.0;
  return make_scenario(ScenarioKind::double_well, c);
}
inline Scenario ring() { return make_scenario(ScenarioKind::ring, base_config(0.7, 0.7)); }
inline Scenario split_arcs() {
  return make_scenario(ScenarioKind::split_arcs, base_config(0.7, 0.14));
}
inline Scenario asym_split_arcs(double Bz = 0.14, double beta = 0.0) {
  TrapConfiguration c = base_config(0.7, 0.07, Bz);
  c.rf.beta = beta;
  return make_scenario(ScenarioKind::asym_split_arcs, c);
}
inline Scenario asym_ring(double Bz = 0.35, double beta = 0.0) {
  TrapConfiguration c = base_config(0.7, 0.7, Bz);
  c.rf.beta = beta;
  return make_scenario(ScenarioKind::asym_ring, c);
}
inline Scenario rotating_well(double rate = 1.0) {
  TrapConfiguration c = base_config(0.7, 0.7, 0.7);
  c.rf.modulation = LinearModulation{rate};
  return make_scenario(ScenarioKind::rotating_well, c);
}
inline Scenario oscillating_well(double rate = 1.0) {
  TrapConfiguration c = base_config(0.7, 0.7, 0.7);
  c.rf.modulation = PeriodicModulation{rate};
  return make_scenario(ScenarioKind::oscillating_well, c);
}

inline Scenario scenario_of(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::double_well: return double_well();
    case ScenarioKind::ring: return ring();
    case ScenarioKind::split_arcs: return split_arcs();
    case ScenarioKind::asym_split_arcs: return asym_split_arcs();
    case ScenarioKind::asym_ring: return asym_ring();
    case ScenarioKind::rotating_well: return rotating_well();
    case ScenarioKind::oscillating_well: return oscillating_well();
  }
  return ring();
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Small hand-rolled generators over a fixed-seed engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double angle() { return uniform(-pi, pi); }

  /// Position away from the trap centre, within a 300 um box.
  Position position() {
    Position p;
    do {
      p = {uniform(-300, 300), uniform(-300, 300), uniform(-50, 50)};
    } while (std::hypot(p.x, p.y, p.z) < 1e-3);
    return p;
  }

  /// In-plane point with 1 um <= rho <= 300 um.
  std::array<double, 2> plane_point() {
    const double rho = uniform(1.0, 300.0), phi = angle();
    return {rho * std::cos(phi), rho * std::sin(phi)};
  }

  RfFieldSpec rf() {
    RfFieldSpec rf;
    rf.Bx = uniform(0, 1);
    rf.By = uniform(0, 1);
    rf.Bz = uniform(0, 1);
    rf.alpha = angle();
    rf.beta = angle();
    rf.omega = two_pi * uniform(0.5e6, 3e6);
    return rf;
  }

  Vec3 vec() { return {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)}; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dtk_test
