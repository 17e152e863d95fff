#pragma once

// Constants, atom species, static quadrupole field, RF field and the local
// frame attached to the static field direction.
//
// Units: lengths in micrometres, fields in Gauss, time in seconds. Energies
// are carried as angular frequencies (E / hbar, rad/s).

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "dressed_trap/error.hpp"

namespace dressed_trap {

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
/// Bohr magneton divided by Planck's constant [Hz/G].
inline constexpr double bohr_magneton_over_h = 1.3996245e6;
/// Reduced Planck constant [J s].
inline constexpr double hbar = 1.054571817e-34;
/// Boltzmann constant [J/K].
inline constexpr double boltzmann = 1.380649e-23;
inline constexpr double um_per_cm = 1.0e4;
inline constexpr double um_per_m = 1.0e6;
/// 87Rb atomic mass [kg].
inline constexpr double rubidium87_mass = 1.44316060e-25;
}  // namespace constants

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, constants::two_pi);
  if (a <= -constants::pi) a += constants::two_pi;
  return a;
}

// ---------------------------------------------------------------------------
// Atom species

class AtomSpecies {
 public:
  /// Angular momenta are passed doubled so half-integer values stay exact.
  static AtomSpecies make(int twice_F, int twice_mF, double g_F, double mass_kg) {
    if (twice_F < 0) fail(Errc::invalid_parameter, "F must be non-negative");
    if (std::abs(twice_mF) > twice_F)
      fail(Errc::invalid_parameter, "|m_F| must not exceed F");
    if ((twice_F - twice_mF) % 2 != 0)
      fail(Errc::invalid_parameter, "F - m_F must be an integer");
    if (!std::isfinite(g_F))
      fail(Errc::invalid_parameter, "g_F must be finite");
    if (!(mass_kg > 0.0) || !std::isfinite(mass_kg))
      fail(Errc::invalid_parameter, "mass must be positive");
    return AtomSpecies(twice_F, twice_mF, g_F, mass_kg);
  }

  /// 87Rb in |F=2, m_F=2>.
  static AtomSpecies rubidium87() {
    return make(4, 4, 0.5, constants::rubidium87_mass);
  }

  int twice_F() const { return twice_F_; }
  int twice_mF() const { return twice_mF_; }
  double F() const { return 0.5 * twice_F_; }
  double m_F() const { return 0.5 * twice_mF_; }
  double g_F() const { return g_F_; }
  double mass() const { return mass_; }

  /// Low-field-seeking analogue, the states that dressed potentials can trap.
  bool trappable() const { return m_F() * g_F_ > 0.0; }

  /// g_F mu_B / hbar in rad/s per Gauss (signed).
  double larmor_per_gauss() const {
    return g_F_ * constants::two_pi * constants::bohr_magneton_over_h;
  }

 private:
  AtomSpecies(int twice_F, int twice_mF, double g_F, double mass)
      : twice_F_(twice_F), twice_mF_(twice_mF), g_F_(g_F), mass_(mass) {}

  int twice_F_;
  int twice_mF_;
  double g_F_;
  double mass_;
};

// ---------------------------------------------------------------------------
// Vectors

struct Position {
  double x = 0.0;  // um
  double y = 0.0;
  double z = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
  friend double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Magnetic field in laboratory components [G].
using FieldVector = Vec3;

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  double operator()(int r, int c) const { return m[r][c]; }
  double& operator()(int r, int c) { return m[r][c]; }

  Vec3 operator*(Vec3 v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  Vec3 column(int c) const { return {m[0][c], m[1][c], m[2][c]}; }

  friend bool operator==(const Mat3&, const Mat3&) = default;
};

// ---------------------------------------------------------------------------
// Static field

class QuadrupoleField {
 public:
  /// `gradient` is the radial gradient B_q in G/cm; the axial gradient is 2 B_q.
  explicit QuadrupoleField(double gradient_G_per_cm) : gradient_(gradient_G_per_cm) {
    if (!(gradient_ > 0.0) || !std::isfinite(gradient_))
      fail(Errc::invalid_parameter, "quadrupole gradient must be positive");
  }

  double gradient() const { return gradient_; }
  /// Gradient in G/um.
  double gradient_per_um() const { return gradient_ / constants::um_per_cm; }

 private:
  double gradient_;
};

/// B_q (x, y, -2z).
inline FieldVector static_field(const QuadrupoleField& quad, const Position& r) {
  const double g = quad.gradient_per_um();
  return {g * r.x, g * r.y, -2.0 * g * r.z};
}

inline double static_field_magnitude(const QuadrupoleField& quad, const Position& r) {
  return quad.gradient_per_um() * std::sqrt(r.x * r.x + r.y * r.y + 4.0 * r.z * r.z);
}

inline void require_plane(double z0) {
  if (!(z0 > 0.0) || !std::isfinite(z0))
    fail(Errc::invalid_plane, "trapping-plane height z0 must be positive");
}

/// |B^S| on the plane z = -z0 at radius rho: B0 sqrt(1 + rho^2 / 4 z0^2).
inline double plane_field_magnitude(const QuadrupoleField& quad, double z0, double rho) {
  require_plane(z0);
  const double b0 = 2.0 * quad.gradient_per_um() * z0;
  return b0 * std::sqrt(1.0 + rho * rho / (4.0 * z0 * z0));
}

// ---------------------------------------------------------------------------
// RF field

struct NoModulation {};

/// beta(t) = rate * t.
struct LinearModulation {
  double rate = 0.0;  // rad/s
};

/// beta(t) = pi cos(rate * t).
struct PeriodicModulation {
  double rate = 0.0;  // rad/s
};

using PhaseModulation = std::variant<NoModulation, LinearModulation, PeriodicModulation>;

inline bool is_modulated(const PhaseModulation& m) {
  return !std::holds_alternative<NoModulation>(m);
}

/// Modulation rate in rad/s, zero when unmodulated.
inline double modulation_rate(const PhaseModulation& m) {
  if (auto* l = std::get_if<LinearModulation>(&m)) return l->rate;
  if (auto* p = std::get_if<PeriodicModulation>(&m)) return p->rate;
  return 0.0;
}

/// B(t) = (Bx cos wt, By cos(wt - alpha), Bz cos(wt - beta_eff(t))).
struct RfFieldSpec {
  double Bx = 0.0;  // G
  double By = 0.0;
  double Bz = 0.0;
  double alpha = 0.0;  // rad
  double beta = 0.0;   // rad, replaced by the modulation law when present
  double omega = 0.0;  // rad/s
  PhaseModulation modulation = NoModulation{};

  void validate() const {
    for (double b : {Bx, By, Bz})
      if (!(b >= 0.0) || !std::isfinite(b))
        fail(Errc::invalid_parameter, "RF amplitudes must be finite and non-negative");
    if (!std::isfinite(alpha) || !std::isfinite(beta))
      fail(Errc::invalid_parameter, "RF phases must be finite");
    if (!(omega > 0.0) || !std::isfinite(omega))
      fail(Errc::invalid_parameter, "RF angular frequency must be positive");
    if (is_modulated(modulation) && !(modulation_rate(modulation) > 0.0))
      fail(Errc::invalid_parameter, "modulation rate must be positive");
  }

  double beta_at(double t) const {
    if (auto* l = std::get_if<LinearModulation>(&modulation)) return l->rate * t;
    if (auto* p = std::get_if<PeriodicModulation>(&modulation))
      return constants::pi * std::cos(p->rate * t);
    return beta;
  }

  /// Copy with the z phase frozen at its value at time t.
  RfFieldSpec frozen_at(double t) const {
    RfFieldSpec r = *this;
    r.beta = beta_at(t);
    r.modulation = NoModulation{};
    return r;
  }
};

inline FieldVector rf_field_lab(const RfFieldSpec& rf, double t) {
  const double wt = rf.omega * t;
  return {rf.Bx * std::cos(wt), rf.By * std::cos(wt - rf.alpha),
          rf.Bz * std::cos(wt - rf.beta_at(t))};
}

// ---------------------------------------------------------------------------
// Local frame

struct RotationMatrices {
  Mat3 forward;  // columns e1, e2, e3
  Mat3 inverse;
};

/// Maps the laboratory basis onto (e1, e2, e3); the inverse is the transpose.
inline RotationMatrices rotation_matrices(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  RotationMatrices r;
  r.forward.m = {{{ct * cp, sp, st * cp},
                  {ct * sp, -cp, st * sp},
                  {st, 0.0, -ct}}};
  r.inverse = r.forward.transposed();
  return r;
}

struct LocalFrame {
  double theta = 0.0;
  double phi = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double cos_phi = 1.0;
  double sin_phi = 0.0;
  Vec3 e1, e2, e3;
};

/// Frame with e3 along the static quadrupole field at r. On the axis
/// x = y = 0 the azimuth is fixed to phi = 0.
inline LocalFrame local_frame(const Position& r) {
  const double rho = std::hypot(r.x, r.y);
  const double d = std::sqrt(rho * rho + 4.0 * r.z * r.z);
  if (d == 0.0)
    fail(Errc::degenerate_frame, "static field vanishes at the trap centre");

  LocalFrame f;
  f.cos_theta = 2.0 * r.z / d;
  f.sin_theta = rho / d;
  if (rho > 0.0) {
    f.cos_phi = r.x / rho;
    f.sin_phi = r.y / rho;
  }
  f.theta = std::atan2(f.sin_theta, f.cos_theta);
  f.phi = std::atan2(f.sin_phi, f.cos_phi);

  const double ct = f.cos_theta, st = f.sin_theta, cp = f.cos_phi, sp = f.sin_phi;
  f.e1 = {ct * cp, ct * sp, st};
  f.e2 = {sp, -cp, 0.0};
  f.e3 = {st * cp, st * sp, -ct};
  return f;
}

/// Inverse rotation built from the frame's exact direction cosines.
inline Mat3 to_local(const LocalFrame& f) {
  Mat3 m;
  m.m = {{{f.e1.x, f.e1.y, f.e1.z}, {f.e2.x, f.e2.y, f.e2.z}, {f.e3.x, f.e3.y, f.e3.z}}};
  return m;
}

/// (B_perp1(t), B_perp2(t), B_par(t)) in the local frame.
inline Vec3 rf_field_local(const RfFieldSpec& rf, const LocalFrame& frame, double t) {
  return to_local(frame) * rf_field_lab(rf, t);
}

}  // namespace dressed_trap
