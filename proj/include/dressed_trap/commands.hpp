#pragma once

// The four CLI commands as library calls. Each returns a process exit code
// and writes its outputs through the given streams, so the command-line
// front end stays a thin argument parser.

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "dressed_trap/io.hpp"

namespace dressed_trap {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int io = 2;
inline constexpr int tracking = 3;
inline constexpr int mismatch = 4;
}  // namespace exit_code

inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::io: return exit_code::io;
    case Errc::lost_tracking: return exit_code::tracking;
    case Errc::not_time_dependent:
    case Errc::kind_mismatch: return exit_code::mismatch;
    default: return exit_code::config;
  }
}

struct CommandStreams {
  std::ostream& out;  // summary / report
  std::ostream& err;  // diagnostics
};

namespace detail {

inline json summary_header(const std::string& command, const RunSpec& spec) {
  json j;
  j["schema_version"] = summary_schema;
  j["command"] = command;
  j["spec"] = resolved_json(spec);
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Seeds on the resonance circle (or on the x axis for the double well).
inline std::vector<std::array<double, 2>> default_seeds(const Scenario& s) {
  std::vector<std::array<double, 2>> seeds;
  const double R = resonance_radius(s.config());
  if (s.kind() == ScenarioKind::double_well) {
    seeds = {{R, 0.0}, {-R, 0.0}};
  } else {
    for (int k = 0; k < 8; ++k) {
      const double phi = constants::two_pi * k / 8;
      seeds.push_back({R * std::cos(phi), R * std::sin(phi)});
    }
  }
  return seeds;
}

inline json minima_json(const MinimaResult& r) {
  json arr = json::array();
  for (const auto& m : r.minima) arr.push_back(minimum_json(m));
  return arr;
}

/// Distance between the two minima when exactly two proper minima exist.
inline json two_minimum_separation(const MinimaResult& r) {
  std::vector<const MinimumRecord*> proper;
  for (const auto& m : r.minima)
    if (m.classification == Classification::minimum) proper.push_back(&m);
  if (proper.size() != 2) return nullptr;
  return std::hypot(proper[0]->x - proper[1]->x, proper[0]->y - proper[1]->y);
}

inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) fallback << text;
  else write_text_file(path, text);
}

}  // namespace detail

/// Writes the grid CSV to `out_path` and a JSON summary to streams.out.
inline int cmd_grid(const RunSpec& spec, const std::string& out_path, unsigned threads,
                    CommandStreams io) {
  const PotentialModel model = spec.potential_model();
  const PotentialGrid g = eval_grid(model, spec.grid.grid, spec.grid.t, threads);

  std::ostringstream csv;
  write_grid_csv(csv, g);
  if (out_path.empty()) fail(Errc::io, "grid needs an output path");
  write_text_file(out_path, csv.str());

  json j = detail::summary_header("grid", spec);
  j["output"] = out_path;
  j["rows_count"] = g.grid.size();
  j["failed_cells_count"] = g.failed;

  std::size_t best = 0, worst = 0;
  bool any = false;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (!std::isfinite(g.values[k])) continue;
    if (!any || g.values[k] < g.values[best]) best = k;
    if (!any || g.values[k] > g.values[worst]) worst = k;
    any = true;
  }
  if (any) {
    const double bx = g.grid.x(static_cast<int>(best % g.grid.nx));
    const double by = g.grid.y(static_cast<int>(best / g.grid.nx));
    j["V_min_h_kHz"] = to_h_kHz(g.values[best]);
    j["V_max_h_kHz"] = to_h_kHz(g.values[worst]);
    j["grid_minimum"] = {{"x_um", bx}, {"y_um", by}, {"rho_um", std::hypot(bx, by)}};
  }

  auto seeds = spec.seeds.empty() ? grid_local_minima(g) : spec.seeds;
  if (!seeds.empty()) {
    const MinimaResult r = find_minima(model, spec.grid.t, seeds);
    j["minima"] = detail::minima_json(r);
    j["unconverged_seeds_count"] = r.unconverged_seeds;
    j["two_minimum_separation_um"] = detail::two_minimum_separation(r);
  }
  io.out << detail::dump(j);
  return exit_code::ok;
}

inline json ring_radius_sweep(const RunSpec& spec) {
  const SweepSettings& sw = *spec.sweep;
  json rows = json::array();
  for (double f : sw.f_MHz) {
    for (int k = 0; k < sw.steps; ++k) {
      const double Bq =
          sw.steps == 1 ? sw.Bq_from : sw.Bq_from + (sw.Bq_to - sw.Bq_from) * k / (sw.steps - 1);
      TrapConfiguration c = spec.config;
      c.quad = QuadrupoleField(Bq);
      c.rf.omega = constants::two_pi * f * 1e6;
      json row = {{"Bq_G_per_cm", Bq}, {"f_MHz", f}};
      try {
        row["ring_radius_um"] = resonance_radius(c);
      } catch (const Error& e) {
        if (e.code() != Errc::no_ring) throw;
        row["ring_radius_um"] = nullptr;
        row["reason"] = "below resonance";
      }
      rows.push_back(row);
    }
  }
  return rows;
}

/// Derived quantities: ring radius, well separation, critical gradient,
/// numerically located minima and the optional R(B_q) sweep.
inline int cmd_derive(const RunSpec& spec, const std::string& out_path, CommandStreams io) {
  const Scenario s = spec.scenario();
  const TrapConfiguration& c = s.config();
  json j = detail::summary_header("derive", spec);
  j["critical_gradient_G_per_cm"] = critical_gradient(c.species, c.rf.omega, c.z0);

  auto guarded = [&](const char* key, auto&& compute) {
    try {
      j[key] = compute();
    } catch (const Error& e) {
      j[key] = nullptr;
      const std::string reason =
          (e.code() == Errc::no_ring || e.code() == Errc::no_double_well) ? "below resonance"
          : e.code() == Errc::kind_mismatch ? "not applicable to kind " + std::string(to_string(s.kind()))
                                            : std::string(e.what());
      j[std::string(key) + "_reason"] = reason;
    }
  };
  guarded("ring_radius_um", [&] { return ring_radius(s); });
  guarded("well_separation_um", [&] { return well_separation(s); });

  bool resonant = true;
  try {
    resonance_radius(c);
  } catch (const Error&) {
    resonant = false;
  }
  if (resonant) {
    const PotentialModel model(s, spec.model);
    const auto seeds = spec.seeds.empty() ? detail::default_seeds(s) : spec.seeds;
    const MinimaResult r = find_minima(model, 0.0, seeds);
    j["minima"] = detail::minima_json(r);
    j["unconverged_seeds_count"] = r.unconverged_seeds;
    j["two_minimum_separation_um"] = detail::two_minimum_separation(r);
  }
  if (spec.sweep) j["sweep"] = ring_radius_sweep(spec);

  detail::emit(out_path, detail::dump(j), io.out);
  return exit_code::ok;
}

/// Number of track samples: at least 64 per modulation period.
inline int resolved_track_steps(const RunSpec& spec, const TrackSettings& ts) {
  if (ts.n_steps >= 2) return ts.n_steps;
  const double period = constants::two_pi / modulation_rate(spec.config.rf.modulation);
  return std::max(2, static_cast<int>(std::ceil(64.0 * (ts.t1 - ts.t0) / period)) + 1);
}

inline int cmd_track(const RunSpec& spec, const std::string& out_path, CommandStreams io) {
  const Scenario s = spec.scenario();
  if (!is_time_dependent(s.kind())) {
    io.err << "error: scenario is not time-dependent\n";
    return exit_code::mismatch;
  }
  const PotentialModel model(s, spec.model);
  TrackSettings ts;
  if (spec.track) {
    ts = *spec.track;
  } else {
    ts.t1 = constants::two_pi / modulation_rate(s.config().rf.modulation);
  }
  ts.n_steps = resolved_track_steps(spec, ts);

  const auto path = track_minimum(model, ts.t0, ts.t1, ts.n_steps);

  json j = detail::summary_header("track", spec);
  j["n_steps_count"] = ts.n_steps;
  json series = json::array();
  double max_dev = 0.0;
  for (const auto& p : path) {
    const double analytic = well_azimuth(s, p.t);
    const double dev = std::abs(wrap_angle(p.phi - analytic));
    max_dev = std::max(max_dev, dev);
    series.push_back({{"t_s", p.t},
                      {"phi_min_rad", p.phi},
                      {"phi_analytic_rad", analytic},
                      {"rho_min_um", p.rho},
                      {"V_h_kHz", to_h_kHz(p.V_over_hbar)}});
  }
  j["series"] = series;
  j["max_deviation_rad"] = max_dev;

  // Sense reversals: sign changes of the azimuthal step.
  json reversals = json::array();
  int last_sign = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double step = path[i].phi - path[i - 1].phi;
    const int sign = step > 1e-9 ? 1 : (step < -1e-9 ? -1 : 0);
    if (sign != 0 && last_sign != 0 && sign != last_sign) reversals.push_back(path[i - 1].t);
    if (sign != 0) last_sign = sign;
  }
  j["reversal_times_s"] = reversals;

  const AdiabaticityReport a = adiabaticity_report(model);
  j["adiabaticity"] = {{"modulation_rate_rad_s", a.modulation_rate},
                       {"carrier_rad_s", a.carrier},
                       {"rabi_min_rad_s", a.rabi_min},
                       {"modulation_over_carrier_ratio", a.ratio_carrier},
                       {"modulation_over_rabi_ratio", a.ratio_rabi},
                       {"carrier_ok", a.carrier_ok},
                       {"rabi_ok", a.rabi_ok}};
  if (!a.carrier_ok || !a.rabi_ok)
    io.err << "warning: modulation is not slow compared to the carrier or the Rabi frequency\n";

  detail::emit(out_path, detail::dump(j), io.out);
  return exit_code::ok;
}

inline int cmd_simulate(const RunSpec& spec, const std::string& out_path, CommandStreams io) {
  if (!spec.simulate) fail(Errc::config, "missing required config block 'simulate'");
  const SimulateSettings& ss = *spec.simulate;
  const PotentialModel model = spec.potential_model();
  SimulationOptions opt;
  opt.escape_radius = ss.escape_radius;
  const Trajectory tr = simulate_atom(model, ss.start, ss.duration, ss.dt, opt);

  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  if (out_path.empty()) fail(Errc::io, "simulate needs an output path");
  write_text_file(out_path, csv.str());

  json j = detail::summary_header("simulate", spec);
  j["output"] = out_path;
  j["samples_count"] = tr.states.size();
  j["escaped"] = tr.escaped;
  j["energy_drift_ratio"] = tr.relative_energy_drift();
  j["energy_excursion_ratio"] = tr.relative_energy_excursion();
  const AtomState& last = tr.states.back();
  j["final"] = {{"t_s", last.t}, {"x_um", last.x}, {"y_um", last.y},
                {"vx_um_s", last.vx}, {"vy_um_s", last.vy}};
  if (tr.escaped) {
    j["note"] = "trajectory truncated: atom left the escape radius";
    io.err << "note: atom escaped; trajectory truncated at t = " << format_number(last.t) << " s\n";
  }
  io.out << detail::dump(j);
  return exit_code::ok;
}

/// Parses the config and dispatches; all library errors become exit codes.
inline int run_command(const std::string& command, const std::string& config_path,
                       const std::string& out_path, unsigned threads, CommandStreams io) {
  try {
    const RunSpec spec = parse_config(config_path);
    if (command == "grid") return cmd_grid(spec, out_path, threads, io);
    if (command == "derive") return cmd_derive(spec, out_path, io);
    if (command == "track") return cmd_track(spec, out_path, io);
    if (command == "simulate") return cmd_simulate(spec, out_path, io);
    io.err << "error: unknown command '" << command << "'\n";
    return exit_code::mismatch;
  } catch (const Error& e) {
    io.err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace dressed_trap
