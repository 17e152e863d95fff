#pragma once

// Detuning, Rabi frequency and the RF-dressed adiabatic potential
// V = m_F hbar sqrt(delta^2 + Omega^2), evaluated for an arbitrarily
// polarized RF field in the rotating-wave approximation.

#include <cmath>
#include <complex>

#include "dressed_trap/physics.hpp"

namespace dressed_trap {

/// Omega / omega above which the rotating-wave approximation is flagged.
inline constexpr double rwa_warning_ratio = 0.1;

struct DressedSample {
  double delta = 0.0;        // rad/s
  double rabi = 0.0;         // rad/s, >= 0
  double V_over_hbar = 0.0;  // rad/s
  Position position;
  double time = 0.0;
  bool rwa_strained = false;
};

/// Perpendicular RF components written as A_i cos(wt + psi_i), with
/// gamma = psi_2 - psi_1.
struct LocalRfHarmonics {
  double A1 = 0.0;  // G
  double A2 = 0.0;
  double gamma = 0.0;  // rad, (-pi, pi]
  double A_par = 0.0;  // carried along, never enters Omega
};

/// omega - (g_F mu_B / hbar) |B^S(r)|.
inline double detuning(const AtomSpecies& species, const QuadrupoleField& quad,
                       const Position& r, double omega) {
  return omega - species.larmor_per_gauss() * static_field_magnitude(quad, r);
}

inline double detuning_on_plane(const AtomSpecies& species, const QuadrupoleField& quad,
                                double z0, double rho, double omega) {
  return omega - species.larmor_per_gauss() * plane_field_magnitude(quad, z0, rho);
}

/// |g_F| mu_B / (2 hbar) in rad/s per Gauss.
inline double half_larmor(const AtomSpecies& species) {
  return 0.5 * std::abs(species.larmor_per_gauss());
}

namespace detail {

inline double coupling_from_bracket(const AtomSpecies& species, double bracket,
                                    double amplitude_scale) {
  if (bracket < 0.0) {
    // A1^2 + A2^2 - 2 A1 A2 >= 0, so only rounding can get here.
    if (bracket < -1e-12 * amplitude_scale * amplitude_scale)
      fail(Errc::numerical_failure, "negative Rabi radicand");
    bracket = 0.0;
  }
  return half_larmor(species) * std::sqrt(bracket);
}

}  // namespace detail

/// Squared effective coupling amplitude [G^2] for the laboratory-frame
/// field, i.e. |Omega|^2 / (g_F mu_B / 2 hbar)^2 written out in x, y, z.
inline double rabi_bracket(const RfFieldSpec& rf, const Position& r, double t) {
  const double x = r.x, y = r.y, z = r.z;
  const double rho2 = x * x + y * y;
  const double d2 = rho2 + 4.0 * z * z;
  if (d2 == 0.0) fail(Errc::degenerate_frame, "static field vanishes at the trap centre");
  const double d = std::sqrt(d2);

  const double Bx = rf.Bx, By = rf.By, Bz = rf.Bz;
  const double a = rf.alpha;
  const double b = rf.beta_at(t);

  if (rho2 == 0.0) {
    // Limit rho -> 0; every surviving term is direction independent.
    const double sign_z = z > 0.0 ? 1.0 : -1.0;
    return Bx * Bx + By * By + 2.0 * Bx * By * std::sin(a) * sign_z;
  }

  return 4.0 * z * z / d2 * ((Bx * Bx * x * x + By * By * y * y) / rho2) +
         (Bx * Bx * y * y + By * By * x * x) / rho2 +
         Bz * Bz * (rho2 / d2) -
         2.0 * Bx * By * x * y * std::cos(a) / d2 +
         4.0 * Bx * By * z * std::sin(a) / d +
         4.0 * By * Bz * y * z * std::cos(a - b) / d2 +
         2.0 * By * Bz * x * std::sin(a - b) / d +
         4.0 * Bz * Bx * z * x * std::cos(b) / d2 +
         2.0 * Bz * Bx * y * std::sin(b) / d;
}

/// Rabi frequency from the closed laboratory-frame expression.
inline double rabi_general(const AtomSpecies& species, const RfFieldSpec& rf,
                           const Position& r, double t) {
  return detail::coupling_from_bracket(species, rabi_bracket(rf, r, t),
                                       rf.Bx + rf.By + rf.Bz);
}

/// Decomposes the local-frame RF components of a pure carrier (z phase
/// frozen at t_ref) into amplitudes and relative phase.
inline LocalRfHarmonics local_harmonics(const RfFieldSpec& rf, const LocalFrame& frame,
                                        double t_ref) {
  using cplx = std::complex<double>;
  // Component k = Re(c_k e^{i w t}).
  const cplx lab[3] = {cplx(rf.Bx, 0.0), std::polar(rf.By, -rf.alpha),
                       std::polar(rf.Bz, -rf.beta_at(t_ref))};
  const Vec3 rows[3] = {frame.e1, frame.e2, frame.e3};
  cplx local[3];
  for (int i = 0; i < 3; ++i)
    local[i] = rows[i].x * lab[0] + rows[i].y * lab[1] + rows[i].z * lab[2];

  LocalRfHarmonics h;
  h.A1 = std::abs(local[0]);
  h.A2 = std::abs(local[1]);
  h.A_par = std::abs(local[2]);
  if (h.A1 > 0.0 && h.A2 > 0.0)
    h.gamma = wrap_angle(std::arg(local[1]) - std::arg(local[0]));
  return h;
}

/// Squared coupling amplitude [G^2]: A1^2 + A2^2 + 2 A1 A2 sin(gamma).
inline double harmonics_bracket(const LocalRfHarmonics& h) {
  return h.A1 * h.A1 + h.A2 * h.A2 + 2.0 * h.A1 * h.A2 * std::sin(h.gamma);
}

inline double rabi_from_harmonics(const AtomSpecies& species, const LocalRfHarmonics& h) {
  return detail::coupling_from_bracket(species, harmonics_bracket(h), h.A1 + h.A2);
}

inline DressedSample make_sample(const AtomSpecies& species, double delta, double rabi,
                                 double omega) {
  DressedSample s;
  s.delta = delta;
  s.rabi = rabi;
  s.V_over_hbar = species.m_F() * std::sqrt(delta * delta + rabi * rabi);
  s.rwa_strained = rabi > rwa_warning_ratio * omega;
  return s;
}

/// Dressed potential at a laboratory point; modulated phases are frozen at t.
inline DressedSample potential(const AtomSpecies& species, const QuadrupoleField& quad,
                               const RfFieldSpec& rf, const Position& r, double t) {
  const double rabi = rabi_general(species, rf, r, t);
  DressedSample s = make_sample(species, detuning(species, quad, r, rf.omega), rabi, rf.omega);
  s.position = r;
  s.time = t;
  return s;
}

}  // namespace dressed_trap
