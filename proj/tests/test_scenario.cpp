#include <gtest/gtest.h>

#include "support.hpp"

using namespace dtk_test;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::numerical_failure;
}

}  // namespace

TEST(MakeScenario, StandardConfigurationsAreValid) {
  EXPECT_NO_THROW(ring());
  EXPECT_NO_THROW(split_arcs());
  EXPECT_NO_THROW(double_well());
  EXPECT_NO_THROW(asym_split_arcs());
  EXPECT_NO_THROW(asym_ring());
  EXPECT_NO_THROW(rotating_well());
  EXPECT_NO_THROW(oscillating_well());
}

TEST(MakeScenario, RingNeedsEqualAmplitudes) {
  try {
    make_scenario(ScenarioKind::ring, base_config(0.7, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::scenario_validation);
    EXPECT_NE(std::string(e.what()).find("B_x = B_y"), std::string::npos);
  }
}

TEST(MakeScenario, ConstraintBreaches) {
  auto bad = [](ScenarioKind k, TrapConfiguration c) {
    EXPECT_EQ(code_of([&] { make_scenario(k, c); }), Errc::scenario_validation) << to_string(k);
  };
  bad(ScenarioKind::double_well, base_config(0.7, 0.1));
  bad(ScenarioKind::double_well, base_config(0.7, 0.0, 0.1));
  bad(ScenarioKind::ring, base_config(0.7, 0.7, 0.1));
  TrapConfiguration wrong_phase = base_config(0.7, 0.7);
  wrong_phase.rf.alpha = constants::pi / 2;
  bad(ScenarioKind::ring, wrong_phase);
  bad(ScenarioKind::split_arcs, base_config(0.7, 0.7));
  bad(ScenarioKind::asym_split_arcs, base_config(0.7, 0.07));
  bad(ScenarioKind::asym_ring, base_config(0.7, 0.7));
  bad(ScenarioKind::rotating_well, base_config(0.7, 0.7, 0.7));
  TrapConfiguration periodic = base_config(0.7, 0.7, 0.7);
  periodic.rf.modulation = PeriodicModulation{1.0};
  bad(ScenarioKind::rotating_well, periodic);
  bad(ScenarioKind::asym_ring, periodic);
  TrapConfiguration plane = base_config(0.7, 0.7);
  plane.z0 = 0.0;
  EXPECT_EQ(code_of([&] { make_scenario(ScenarioKind::ring, plane); }), Errc::invalid_plane);
}

TEST(MakeScenario, KindNames) {
  for (ScenarioKind k : all_scenario_kinds)
    EXPECT_EQ(scenario_kind_from_string(to_string(k)), k);
  EXPECT_FALSE(scenario_kind_from_string("donut").has_value());
}

TEST(ClosedForm, RingValueAtResonance) {
  const double v = closed_form_potential(ring(), ring_radius_um, 0, 0);
  EXPECT_NEAR(v / two_pi / 1e6, ring_V_at_R_MHz, 1e-9);
  EXPECT_NEAR(v / two_pi / 1e6, 0.55846, 5e-5);
}

TEST(ClosedForm, DoubleWellAnisotropy) {
  const Scenario s = double_well();
  const double R = ring_radius_um;
  const DressedSample on_y = closed_form_sample(s, 0, R, 0);
  EXPECT_NEAR(on_y.rabi, half_larmor(s.config().species) * 0.7, 1e-6);
  EXPECT_GT(on_y.V_over_hbar, closed_form_potential(s, R, 0, 0));
  EXPECT_GT(on_y.V_over_hbar, closed_form_potential(s, -R, 0, 0));
}

TEST(ClosedForm, RotatingWellPeriodic) {
  const Scenario s = rotating_well(1.0);
  Gen g(41);
  for (int i = 0; i < 200; ++i) {
    const auto [x, y] = g.plane_point();
    const double t = g.uniform(0, 10);
    EXPECT_LT(rel_diff(closed_form_potential(s, x, y, t), closed_form_potential(s, x, y, t + two_pi)),
              1e-12);
  }
}

TEST(ClosedForm, KindMismatch) {
  EXPECT_EQ(code_of([] { closed_form_potential(base_config(0.7, 0.5), ScenarioKind::ring, 10, 0, 0); }),
            Errc::kind_mismatch);
  EXPECT_NO_THROW(closed_form_potential(base_config(0.7, 0.7), ScenarioKind::ring, 10, 0, 0));
}

TEST(ClosedForm, MatchesGeneralPathForEveryKind) {
  Gen g(42);
  for (ScenarioKind k : all_scenario_kinds) {
    const Scenario s = scenario_of(k);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto [x, y] = g.plane_point();
      const double t = g.uniform(0, 10);
      worst = std::max(worst, rel_diff(closed_form_potential(s, x, y, t),
                                       general_sample(s.config(), x, y, t).V_over_hbar));
    }
    EXPECT_LT(worst, 1e-10) << to_string(k);
    EXPECT_LT(rel_diff(closed_form_potential(s, 0, 0, 0.1),
                       general_sample(s.config(), 0, 0, 0.1).V_over_hbar),
              1e-10)
        << to_string(k) << " on axis";
  }
}

TEST(ClosedForm, RandomisedConfigurationsMatchGeneralPath) {
  Gen g(43);
  for (int i = 0; i < 500; ++i) {
    const ScenarioKind k = all_scenario_kinds[i % all_scenario_kinds.size()];
    const double Bx = g.uniform(0.05, 1.0);
    double By = Bx, Bz = 0.0;
    if (k == ScenarioKind::double_well) By = 0.0;
    if (k == ScenarioKind::split_arcs || k == ScenarioKind::asym_split_arcs) By = g.uniform(0.0, 1.0);
    if (k == ScenarioKind::asym_split_arcs || has_tilted_ring(k)) Bz = g.uniform(0.01, 1.0);
    TrapConfiguration c = base_config(Bx, By, Bz, g.uniform(0.5, 3.0));
    if (k == ScenarioKind::double_well) c.rf.alpha = g.angle();
    c.rf.beta = g.angle();
    c.z0 = g.uniform(2, 40);
    c.quad = QuadrupoleField(g.uniform(20, 400));
    if (k == ScenarioKind::rotating_well) c.rf.modulation = LinearModulation{g.uniform(0.1, 5)};
    if (k == ScenarioKind::oscillating_well) c.rf.modulation = PeriodicModulation{g.uniform(0.1, 5)};
    const Scenario s = make_scenario(k, c);
    const auto [x, y] = g.plane_point();
    const double t = g.uniform(0, 5);
    EXPECT_LT(rel_diff(closed_form_potential(s, x, y, t), general_sample(c, x, y, t).V_over_hbar),
              1e-10)
        << to_string(k);
  }
}

TEST(ClosedForm, RingIsotropy) {
  const Scenario s = ring();
  Gen g(44);
  for (int i = 0; i < 500; ++i) {
    const double rho = g.uniform(0.1, 300);
    const double a = g.angle(), b = g.angle();
    EXPECT_LT(rel_diff(closed_form_potential(s, rho * std::cos(a), rho * std::sin(a), 0),
                       closed_form_potential(s, rho * std::cos(b), rho * std::sin(b), 0)),
              1e-12);
  }
}

TEST(ClosedForm, SplitArcPointSymmetry) {
  const Scenario s = split_arcs();
  Gen g(45);
  for (int i = 0; i < 500; ++i) {
    const auto [x, y] = g.plane_point();
    EXPECT_LT(rel_diff(closed_form_potential(s, x, y, 0), closed_form_potential(s, -x, -y, 0)), 1e-12);
  }
}

TEST(WellSeparation, StandardParameters) {
  EXPECT_NEAR(well_separation(double_well()), well_separation_um, 1e-9);
  EXPECT_NEAR(well_separation(double_well()), 282.97, 0.01);
}

TEST(WellSeparation, LowerFrequency) {
  TrapConfiguration c = base_config(0.7, 0.0, 0.0, 1.0);
  c.rf.alpha = 0.0;
  EXPECT_NEAR(well_separation(make_scenario(ScenarioKind::double_well, c)), 186.28, 0.01);
}

TEST(WellSeparation, ExactResonanceGivesZero) {
  TrapConfiguration c = base_config(0.7);
  c.rf.alpha = 0.0;
  c.rf.omega = c.species.larmor_per_gauss() * 0.3;
  EXPECT_EQ(well_separation(make_scenario(ScenarioKind::double_well, c)), 0.0);
}

TEST(WellSeparation, BelowResonance) {
  TrapConfiguration c = base_config(0.7, 0.0, 0.0, 0.2);
  c.rf.alpha = 0.0;
  EXPECT_EQ(code_of([&] { well_separation(make_scenario(ScenarioKind::double_well, c)); }),
            Errc::no_double_well);
  EXPECT_EQ(code_of([] { well_separation(ring()); }), Errc::kind_mismatch);
}

TEST(RingRadius, StandardParameters) {
  EXPECT_NEAR(ring_radius(ring()), ring_radius_um, 1e-9);
  EXPECT_NEAR(ring_radius(ring()), 140.0, 0.02 * 140.0);
}

TEST(RingRadius, CriticalGradient) {
  const TrapConfiguration c = base_config(0.7, 0.7);
  const double crit = critical_gradient(c.species, c.rf.omega, c.z0);
  EXPECT_NEAR(crit, critical_gradient_G_per_cm, 1e-9);
  TrapConfiguration at = c;
  at.quad = QuadrupoleField(crit);
  EXPECT_LT(ring_radius(make_scenario(ScenarioKind::ring, at)), 1e-4);
  at.quad = QuadrupoleField(1200);
  EXPECT_EQ(code_of([&] { ring_radius(make_scenario(ScenarioKind::ring, at)); }), Errc::no_ring);
  EXPECT_EQ(code_of([] { ring_radius(double_well()); }), Errc::kind_mismatch);
}

TEST(RingRadius, DecreasingInGradient) {
  TrapConfiguration c = base_config(0.7, 0.7);
  double prev = std::numeric_limits<double>::infinity();
  for (double bq = 50; bq <= 1000; bq += 5) {
    c.quad = QuadrupoleField(bq);
    const double R = ring_radius(make_scenario(ScenarioKind::ring, c));
    EXPECT_LT(R, prev);
    prev = R;
  }
}

TEST(RingRadius, HalfWellSeparation) {
  Gen g(46);
  for (int i = 0; i < 1000; ++i) {
    TrapConfiguration c = base_config(0.7, 0.0, 0.0, g.uniform(1.0, 5.0));
    c.rf.alpha = 0.0;
    c.quad = QuadrupoleField(g.uniform(10, 200));
    c.z0 = g.uniform(1, 20);
    const double d = well_separation(make_scenario(ScenarioKind::double_well, c));
    EXPECT_LT(rel_diff(d, 2 * resonance_radius(c)), 1e-12);
  }
}

TEST(WellAzimuth, StaticTiltedRing) {
  EXPECT_EQ(well_azimuth(asym_ring(0.35, 0.0), 0), 0.0);
  EXPECT_NEAR(well_azimuth(asym_ring(0.35, 1.0), 0), -1.0, 1e-15);
  EXPECT_EQ(code_of([] { well_azimuth(ring(), 0); }), Errc::kind_mismatch);
}

TEST(WellAzimuth, RotatingWell) {
  EXPECT_NEAR(well_azimuth(rotating_well(1.0), pi / 2), -pi / 2, 1e-15);
  EXPECT_NEAR(well_azimuth(rotating_well(2.0), pi / 2), pi, 1e-12);
}

TEST(WellAzimuth, OscillatingWell) {
  EXPECT_NEAR(well_azimuth(oscillating_well(1.0), 0), -pi, 1e-15);
  EXPECT_NEAR(well_azimuth(oscillating_well(1.0), pi), pi, 1e-15);
  EXPECT_NEAR(well_azimuth(oscillating_well(1.0), pi / 2), 0.0, 1e-15);
}
