#pragma once

// Numerical services over an in-plane potential: grids, gradients, minima,
// azimuthal ring profiles and time tracking of a moving well.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "dressed_trap/minimize.hpp"
#include "dressed_trap/scenario.hpp"

namespace dressed_trap {

enum class Model { closed_form, general };

/// Which formula evaluates the potential of a scenario on its plane.
class PotentialModel {
 public:
  explicit PotentialModel(Scenario scenario, Model model = Model::closed_form)
      : scenario_(std::move(scenario)), model_(model) {}

  const Scenario& scenario() const { return scenario_; }
  const TrapConfiguration& config() const { return scenario_.config(); }
  Model model() const { return model_; }

  DressedSample sample(double x, double y, double t) const {
    if (model_ == Model::closed_form) return closed_form_sample(scenario_, x, y, t);
    return general_sample(scenario_.config(), x, y, t);
  }

  double operator()(double x, double y, double t) const { return sample(x, y, t).V_over_hbar; }

 private:
  Scenario scenario_;
  Model model_;
};

// ---------------------------------------------------------------------------
// Grids

struct PlaneGrid {
  double x_min = -200.0, x_max = 200.0;
  double y_min = -200.0, y_max = 200.0;
  int nx = 201, ny = 201;

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max))
      fail(Errc::invalid_parameter, "grid bounds must satisfy min < max");
    if (nx < 2 || ny < 2) fail(Errc::invalid_parameter, "grid needs at least 2 points per axis");
  }
  double x(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
  double y(int j) const { return y_min + (y_max - y_min) * j / (ny - 1); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  /// Row-major with y as the slow index.
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

struct PotentialGrid {
  PlaneGrid grid;
  double z0 = 0.0;
  double time = 0.0;
  std::vector<double> values;  // V / hbar, rad/s
  std::vector<double> delta;
  std::vector<double> rabi;
  std::size_t failed = 0;      // cells holding NaN after an evaluation error
};

inline PotentialGrid eval_grid(const PotentialModel& model, const PlaneGrid& grid, double t,
                               unsigned threads = 1) {
  grid.validate();
  PotentialGrid out;
  out.grid = grid;
  out.z0 = model.config().z0;
  out.time = t;
  const std::size_t n = grid.size();
  out.values.assign(n, 0.0);
  out.delta.assign(n, 0.0);
  out.rabi.assign(n, 0.0);
  std::vector<unsigned char> bad(n, 0);

  auto rows = [&](int first, int stride) {
    for (int j = first; j < grid.ny; j += stride) {
      for (int i = 0; i < grid.nx; ++i) {
        const std::size_t k = grid.index(i, j);
        try {
          const DressedSample s = model.sample(grid.x(i), grid.y(j), t);
          out.values[k] = s.V_over_hbar;
          out.delta[k] = s.delta;
          out.rabi[k] = s.rabi;
        } catch (const Error&) {
          constexpr double nan = std::numeric_limits<double>::quiet_NaN();
          out.values[k] = out.delta[k] = out.rabi[k] = nan;
          bad[k] = 1;
        }
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.ny)));
  if (threads == 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back(rows, static_cast<int>(w), static_cast<int>(threads));
  }
  for (unsigned char b : bad) out.failed += b;
  return out;
}

// ---------------------------------------------------------------------------
// Derivatives

struct GradientOptions {
  double step = 1e-3;  // um
  bool richardson = false;
};

struct Gradient {
  double dx = 0.0;  // rad/s per um
  double dy = 0.0;
};

inline Gradient central_difference(const PotentialModel& m, double x, double y, double t,
                                   double h) {
  return {(m(x + h, y, t) - m(x - h, y, t)) / (2.0 * h),
          (m(x, y + h, t) - m(x, y - h, t)) / (2.0 * h)};
}

/// Returns NaN components if a probe point cannot be evaluated.
inline Gradient gradient(const PotentialModel& m, double x, double y, double t,
                         const GradientOptions& opt = {}) {
  try {
    const Gradient g = central_difference(m, x, y, t, opt.step);
    if (!opt.richardson) return g;
    const Gradient half = central_difference(m, x, y, t, 0.5 * opt.step);
    return {(4.0 * half.dx - g.dx) / 3.0, (4.0 * half.dy - g.dy) / 3.0};
  } catch (const Error&) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
}

struct Hessian {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  /// Eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const {
    const double mean = 0.5 * (xx + yy);
    const double r = std::hypot(0.5 * (xx - yy), xy);
    return {mean - r, mean + r};
  }
};

inline Hessian hessian(const PotentialModel& m, double x, double y, double t, double h = 1e-2) {
  const double f0 = m(x, y, t);
  Hessian H;
  H.xx = (m(x + h, y, t) - 2.0 * f0 + m(x - h, y, t)) / (h * h);
  H.yy = (m(x, y + h, t) - 2.0 * f0 + m(x, y - h, t)) / (h * h);
  H.xy = (m(x + h, y + h, t) - m(x + h, y - h, t) - m(x - h, y + h, t) + m(x - h, y - h, t)) /
         (4.0 * h * h);
  return H;
}

// ---------------------------------------------------------------------------
// Minima

enum class Classification { minimum, saddle, degenerate };

constexpr std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::minimum: return "minimum";
    case Classification::saddle: return "saddle";
    case Classification::degenerate: return "degenerate";
  }
  return "unknown";
}

struct MinimumRecord {
  double x = 0.0, y = 0.0;  // um
  double V_over_hbar = 0.0;
  double azimuth = 0.0;
  std::array<double, 2> curvature{};  // rad/s per um^2, ascending
  Classification classification = Classification::degenerate;
};

struct MinimaOptions {
  NelderMeadOptions simplex{};
  double merge_radius = 0.5;         // um
  double hessian_step = 1e-2;        // um
  double curvature_floor = 1e-12;    // rad/s per um^2
  /// Curvatures below this fraction of the stiffest one count as flat.
  double curvature_relative = 1e-4;
};

struct MinimaResult {
  std::vector<MinimumRecord> minima;
  std::size_t unconverged_seeds = 0;
};

inline Classification classify(const std::array<double, 2>& ev, const MinimaOptions& opt) {
  const double tol =
      std::max(opt.curvature_floor, opt.curvature_relative * std::max(std::abs(ev[0]), std::abs(ev[1])));
  if (ev[0] > tol && ev[1] > tol) return Classification::minimum;
  if (ev[0] < -tol && ev[1] > tol) return Classification::saddle;
  return Classification::degenerate;
}

inline MinimumRecord describe_point(const PotentialModel& m, double x, double y, double t,
                                    const MinimaOptions& opt = {}) {
  MinimumRecord r;
  r.x = x;
  r.y = y;
  r.V_over_hbar = m(x, y, t);
  r.azimuth = std::atan2(y, x);
  r.curvature = hessian(m, x, y, t, opt.hessian_step).eigenvalues();
  r.classification = classify(r.curvature, opt);
  return r;
}

/// Nelder-Mead from every seed, merge coincident results, classify by Hessian.
/// Output is sorted by potential value.
inline MinimaResult find_minima(const PotentialModel& m, double t,
                                const std::vector<std::array<double, 2>>& seeds,
                                const MinimaOptions& opt = {}) {
  if (seeds.empty()) fail(Errc::invalid_parameter, "find_minima needs at least one seed");
  MinimaResult out;
  std::vector<NelderMeadResult<2>> found;
  for (const auto& seed : seeds) {
    auto f = [&](const std::array<double, 2>& p) { return m(p[0], p[1], t); };
    NelderMeadResult<2> r = nelder_mead<2>(f, seed, opt.simplex);
    if (!r.converged) {
      ++out.unconverged_seeds;
      continue;
    }
    found.push_back(r);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  for (const auto& r : found) {
    const bool duplicate = std::any_of(out.minima.begin(), out.minima.end(), [&](const auto& k) {
      return std::hypot(k.x - r.x[0], k.y - r.x[1]) < opt.merge_radius;
    });
    if (!duplicate) out.minima.push_back(describe_point(m, r.x[0], r.x[1], t, opt));
  }
  return out;
}

/// Cells strictly below their 8 neighbours; candidate seeds for find_minima.
inline std::vector<std::array<double, 2>> grid_local_minima(const PotentialGrid& g) {
  std::vector<std::array<double, 2>> out;
  const PlaneGrid& pg = g.grid;
  for (int j = 0; j < pg.ny; ++j) {
    for (int i = 0; i < pg.nx; ++i) {
      const double v = g.values[pg.index(i, j)];
      if (!std::isfinite(v)) continue;
      bool lowest = true;
      for (int dj = -1; dj <= 1 && lowest; ++dj)
        for (int di = -1; di <= 1 && lowest; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= pg.nx || jj >= pg.ny) continue;
          if (!(g.values[pg.index(ii, jj)] > v)) lowest = false;
        }
      if (lowest) out.push_back({pg.x(i), pg.y(j)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ring profile and tracking

struct ProfilePoint {
  double phi = 0.0;
  double rho = 0.0;
  double V_over_hbar = 0.0;
};

struct RadialSearch {
  double inner = 0.2;  // bracket [inner R, outer R]
  double outer = 3.0;
  double tolerance = 1e-4;  // um
};

namespace detail {

inline double ring_bracket_radius(const PotentialModel& m) {
  const double R = ring_radius(m.scenario());
  if (!(R > 0.0)) fail(Errc::no_ring, "resonance ring has zero radius");
  return R;
}

inline ProfilePoint radial_minimum(const PotentialModel& m, double R, double phi, double t,
                                   const RadialSearch& rs) {
  const double c = std::cos(phi), s = std::sin(phi);
  const GoldenResult g = golden_section([&](double rho) { return m(rho * c, rho * s, t); },
                                        rs.inner * R, rs.outer * R, rs.tolerance);
  return {phi, g.x, g.value};
}

}  // namespace detail

/// Radial minimum of the potential along each ray of a uniform angular mesh.
inline std::vector<ProfilePoint> ring_profile(const PotentialModel& m, double t, int n_angles,
                                              const RadialSearch& rs = {}) {
  if (n_angles < 1) fail(Errc::invalid_parameter, "ring_profile needs n_angles >= 1");
  const double R = detail::ring_bracket_radius(m);
  std::vector<ProfilePoint> out;
  out.reserve(n_angles);
  for (int k = 0; k < n_angles; ++k)
    out.push_back(detail::radial_minimum(m, R, constants::two_pi * k / n_angles, t, rs));
  return out;
}

/// Indices of strict local minima of a periodic profile.
inline std::vector<std::size_t> profile_local_minima(const std::vector<ProfilePoint>& p) {
  std::vector<std::size_t> out;
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = p[k].V_over_hbar;
    if (v < p[(k + n - 1) % n].V_over_hbar && v < p[(k + 1) % n].V_over_hbar) out.push_back(k);
  }
  return out;
}

struct TrackSample {
  double t = 0.0;
  double phi = 0.0;  // unwrapped, continuous between samples
  double rho = 0.0;
  double V_over_hbar = 0.0;
};

struct TrackOptions {
  RadialSearch radial{};
  int initial_angles = 256;
  double angle_tolerance = 1e-9;  // rad
  double lost_threshold = constants::pi / 2.0;
};

/// Azimuth of the deepest point of the ring, refined around `centre`.
inline ProfilePoint refine_azimuth(const PotentialModel& m, double R, double t, double centre,
                                   double half_width, const TrackOptions& opt) {
  const GoldenResult g = golden_section(
      [&](double phi) { return detail::radial_minimum(m, R, phi, t, opt.radial).V_over_hbar; },
      centre - half_width, centre + half_width, opt.angle_tolerance);
  return detail::radial_minimum(m, R, g.x, t, opt.radial);
}

/// Follows the deepest point of the ring over [t0, t1], warm-starting each
/// sample from the previous azimuth.
inline std::vector<TrackSample> track_minimum(const PotentialModel& m, double t0, double t1,
                                              int n_steps, const TrackOptions& opt = {}) {
  if (n_steps < 2) fail(Errc::invalid_parameter, "track_minimum needs n_steps >= 2");
  const double R = detail::ring_bracket_radius(m);

  std::vector<TrackSample> out;
  out.reserve(n_steps);
  double previous = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_steps - 1);
    ProfilePoint p;
    if (i == 0) {
      const auto coarse = ring_profile(m, t, opt.initial_angles, opt.radial);
      const auto best = std::min_element(coarse.begin(), coarse.end(), [](auto& a, auto& b) {
        return a.V_over_hbar < b.V_over_hbar;
      });
      const double cell = constants::two_pi / opt.initial_angles;
      p = refine_azimuth(m, R, t, wrap_angle(best->phi), 2.0 * cell, opt);
    } else {
      // Window slightly wider than the loss threshold so a jump is detectable.
      p = refine_azimuth(m, R, t, previous, 1.2 * opt.lost_threshold, opt);
      if (std::abs(p.phi - previous) >= opt.lost_threshold)
        fail(Errc::lost_tracking, "minimum moved by more than pi/2 between samples at t = " +
                                      std::to_string(t) + " s");
    }
    previous = p.phi;
    out.push_back({t, p.phi, p.rho, p.V_over_hbar});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Adiabaticity

struct AdiabaticityReport {
  double modulation_rate = 0.0;  // rad/s
  double carrier = 0.0;          // rad/s
  double rabi_min = 0.0;         // rad/s along the tracked path
  double ratio_carrier = 0.0;    // modulation / carrier
  double ratio_rabi = 0.0;       // modulation / rabi_min
  bool carrier_ok = false;
  bool rabi_ok = false;
};

inline constexpr double adiabatic_ratio_limit = 1e-2;

inline AdiabaticityReport adiabaticity_report(const PotentialModel& m, int samples = 64) {
  const Scenario& s = m.scenario();
  if (!is_time_dependent(s.kind()))
    fail(Errc::not_time_dependent, "scenario is not time-dependent");
  const RfFieldSpec& rf = s.config().rf;

  AdiabaticityReport r;
  r.modulation_rate = modulation_rate(rf.modulation);
  r.carrier = rf.omega;
  const double period = constants::two_pi / r.modulation_rate;
  const auto path = track_minimum(m, 0.0, period, samples + 1);
  r.rabi_min = std::numeric_limits<double>::infinity();
  for (const auto& p : path)
    r.rabi_min = std::min(r.rabi_min, m.sample(p.rho * std::cos(p.phi), p.rho * std::sin(p.phi), p.t).rabi);
  r.ratio_carrier = r.modulation_rate / r.carrier;
  r.ratio_rabi = r.modulation_rate / r.rabi_min;
  r.carrier_ok = r.ratio_carrier <= adiabatic_ratio_limit;
  r.rabi_ok = r.ratio_rabi <= adiabatic_ratio_limit;
  return r;
}

}  // namespace dressed_trap
