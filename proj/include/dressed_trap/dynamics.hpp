#pragma once

// Classical test-atom motion in the trapping plane: velocity Verlet on
// m r'' = -hbar grad(V / hbar), the atom frozen in its dressed state.

#include <cmath>
#include <vector>

#include "dressed_trap/landscape.hpp"

namespace dressed_trap {

struct AtomState {
  double x = 0.0, y = 0.0;    // um
  double vx = 0.0, vy = 0.0;  // um/s
  double t = 0.0;             // s
};

struct SimulationOptions {
  double escape_radius = 1000.0;  // um
  GradientOptions gradient{};
};

struct Trajectory {
  std::vector<AtomState> states;
  std::vector<double> energy;  // (kinetic + potential) / hbar, rad/s
  bool escaped = false;

  /// |E_last - E_first| / |E_first|.
  double relative_energy_drift() const {
    if (energy.size() < 2 || energy.front() == 0.0) return 0.0;
    return std::abs(energy.back() - energy.front()) / std::abs(energy.front());
  }

  /// max |E - E_first| / |E_first|; the bounded O(dt^2) Verlet oscillation.
  double relative_energy_excursion() const {
    if (energy.size() < 2 || energy.front() == 0.0) return 0.0;
    double worst = 0.0;
    for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
    return worst / std::abs(energy.front());
  }
};

/// hbar / m expressed so that (um/s^2) = -factor * (rad/s per um).
inline double acceleration_factor(const AtomSpecies& species) {
  return constants::hbar / species.mass() * constants::um_per_m * constants::um_per_m;
}

inline double kinetic_over_hbar(const AtomSpecies& species, double vx, double vy) {
  const double v2 = (vx * vx + vy * vy) / (constants::um_per_m * constants::um_per_m);
  return 0.5 * species.mass() * v2 / constants::hbar;
}

inline Trajectory simulate_atom(const PotentialModel& m, const AtomState& start, double duration,
                                double dt, const SimulationOptions& opt = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(Errc::invalid_parameter, "dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration))
    fail(Errc::invalid_parameter, "duration must be non-negative");
  for (double v : {start.x, start.y, start.vx, start.vy, start.t})
    if (!std::isfinite(v)) fail(Errc::invalid_parameter, "initial state must be finite");

  const AtomSpecies& species = m.config().species;
  const double k = acceleration_factor(species);
  auto accel = [&](double x, double y, double t) {
    const Gradient g = gradient(m, x, y, t, opt.gradient);
    return Gradient{-k * g.dx, -k * g.dy};
  };
  auto energy = [&](const AtomState& s) {
    return kinetic_over_hbar(species, s.vx, s.vy) + m(s.x, s.y, s.t);
  };

  Trajectory tr;
  const long steps = std::lround(duration / dt);
  tr.states.reserve(steps + 1);
  tr.energy.reserve(steps + 1);

  AtomState s = start;
  Gradient a = accel(s.x, s.y, s.t);
  tr.states.push_back(s);
  tr.energy.push_back(energy(s));
  for (long n = 0; n < steps; ++n) {
    const double vx_half = s.vx + 0.5 * dt * a.dx;
    const double vy_half = s.vy + 0.5 * dt * a.dy;
    s.x += dt * vx_half;
    s.y += dt * vy_half;
    s.t = start.t + (n + 1) * dt;
    if (!(std::hypot(s.x, s.y) <= opt.escape_radius)) {
      tr.escaped = true;
      break;
    }
    a = accel(s.x, s.y, s.t);
    s.vx = vx_half + 0.5 * dt * a.dx;
    s.vy = vy_half + 0.5 * dt * a.dy;
    tr.states.push_back(s);
    tr.energy.push_back(energy(s));
  }
  return tr;
}

}  // namespace dressed_trap
