// Minimal library tour: ring radius, double-well minima and a rotating well.
#include <cstdio>

#include "dressed_trap.hpp"

using namespace dressed_trap;

int main() {
  TrapConfiguration c;
  c.species = AtomSpecies::rubidium87();
  c.quad = QuadrupoleField(150.0);
  c.z0 = 10.0;
  c.rf.Bx = c.rf.By = 0.7;
  c.rf.alpha = circular_alpha;
  c.rf.omega = constants::two_pi * 1.5e6;

  const Scenario ring = make_scenario(ScenarioKind::ring, c);
  const PotentialModel ring_model(ring);
  const ProfilePoint floor = ring_profile(ring_model, 0.0, 1).front();
  std::printf("ring: R = %.4f um, valley floor at rho = %.4f um, V/h = %.2f kHz\n", ring_radius(ring),
              floor.rho, floor.V_over_hbar / constants::two_pi / 1e3);

  TrapConfiguration dw = c;
  dw.rf.By = 0.0;
  dw.rf.alpha = 0.0;
  const Scenario wells = make_scenario(ScenarioKind::double_well, dw);
  const MinimaResult r = find_minima(PotentialModel(wells), 0.0, {{140, 0}, {-140, 0}});
  std::printf("double well: d = %.4f um\n", well_separation(wells));
  for (const auto& m : r.minima) std::printf("  minimum at (%.4f, %.4f) um\n", m.x, m.y);

  TrapConfiguration rot = c;
  rot.rf.Bz = 0.7;
  rot.rf.modulation = LinearModulation{1.0};
  const PotentialModel rot_model(make_scenario(ScenarioKind::rotating_well, rot));
  for (const auto& s : track_minimum(rot_model, 0.0, constants::two_pi, 9))
    std::printf("rotating well: t = %.4f s, phi = %+.4f rad\n", s.t, s.phi);
}
