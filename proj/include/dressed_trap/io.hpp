#pragma once

// Run configuration parsing and the CSV / JSON output formats.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dressed_trap/dynamics.hpp"
#include "dressed_trap/landscape.hpp"

namespace dressed_trap {

using json = nlohmann::json;

inline constexpr const char* summary_schema = "dressed-trap-kit/summary/1";
inline constexpr const char* grid_csv_header = "x_um,y_um,t_s,V_h_kHz,delta_rad_s,rabi_rad_s";
inline constexpr const char* trajectory_csv_header = "t_s,x_um,y_um,vx_um_s,vy_um_s,E_over_h_kHz";

/// Shortest round-trip text capped at 9 significant digits.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, end);
}

/// V / hbar [rad/s] to V / h [kHz].
inline double to_h_kHz(double angular) { return angular / constants::two_pi / 1e3; }

// ---------------------------------------------------------------------------
// Run specification

struct GridSettings {
  PlaneGrid grid;
  double t = 0.0;
};

struct TrackSettings {
  double t0 = 0.0;
  double t1 = 0.0;
  int n_steps = 0;  // resolved to >= 64 samples per modulation period when 0
};

struct SimulateSettings {
  AtomState start;
  double duration = 0.0;
  double dt = 0.0;
  double escape_radius = 1000.0;
};

struct SweepSettings {
  double Bq_from = 50.0;
  double Bq_to = 1000.0;
  int steps = 20;
  std::vector<double> f_MHz;
};

struct RunSpec {
  ScenarioKind kind = ScenarioKind::ring;
  Model model = Model::closed_form;
  TrapConfiguration config;
  GridSettings grid;
  std::optional<TrackSettings> track;
  std::optional<SimulateSettings> simulate;
  std::optional<SweepSettings> sweep;
  std::vector<std::array<double, 2>> seeds;

  Scenario scenario() const { return make_scenario(kind, config); }
  PotentialModel potential_model() const { return PotentialModel(scenario(), model); }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& key, const std::string& expected) {
  fail(Errc::config, "config key '" + key + "': expected " + expected);
}

/// Reads keys out of a JSON object, remembering which were consumed.
class KeyReader {
 public:
  KeyReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) config_error(prefix_.empty() ? "<root>" : prefix_, "an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key, const std::string& unit) {
    const json& v = at(key, "a number in " + unit);
    if (!v.is_number()) config_error(name(key), "a number in " + unit);
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_error(name(key), "a finite number in " + unit);
    return d;
  }

  double number(const std::string& key, const std::string& unit, double fallback) {
    return has(key) ? number(key, unit) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key, "an integer");
    if (!v.is_number_integer()) config_error(name(key), "an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key, "a string");
    if (!v.is_string()) config_error(name(key), "a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  const json& raw(const std::string& key) { return at(key, "a value"); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) fail(Errc::config, "unknown config key '" + name(it.key()) + "'");
  }

  std::string name(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

 private:
  const json& at(const std::string& key, const std::string& expected) {
    if (!obj_.contains(key)) fail(Errc::config, "missing required config key '" + name(key) +
                                                    "' (" + expected + ")");
    used_[key] = true;
    return obj_.at(key);
  }

  const json& obj_;
  std::string prefix_;
  std::map<std::string, bool> used_;
};

inline int twice_quantum_number(const std::string& key, double value) {
  const double twice = 2.0 * value;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    config_error(key, "an integer or half-integer");
  return static_cast<int>(std::lround(twice));
}

/// Accepts `key = value` lines (dotted keys open blocks, '#' starts a comment).
/// Values are read as JSON where possible, otherwise as bare strings.
inline json parse_key_value_text(const std::string& text) {
  json root = json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::config, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string text_value = trim(line.substr(eq + 1));
    if (key.empty()) fail(Errc::config, "line " + std::to_string(lineno) + ": empty key");
    json value = json::parse(text_value, nullptr, false);
    if (value.is_discarded()) value = text_value;

    json* node = &root;
    std::string rest = key;
    for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
      const std::string part = rest.substr(0, dot);
      rest = rest.substr(dot + 1);
      json& child = (*node)[part];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) fail(Errc::config, "config key '" + key + "' conflicts with a value");
      node = &child;
    }
    if (node->contains(rest)) fail(Errc::config, "duplicate config key '" + key + "'");
    (*node)[rest] = value;
  }
  return root;
}

}  // namespace detail

/// Builds a fully validated RunSpec from a parsed document.
inline RunSpec run_spec_from_json(const json& doc) {
  const json root = doc.is_null() ? json::object() : doc;
  detail::KeyReader top(root, "");
  RunSpec spec;

  const std::string kind_name = top.string("kind");
  const auto kind = scenario_kind_from_string(kind_name);
  if (!kind)
    detail::config_error("kind",
                         "one of double_well, ring, split_arcs, asym_split_arcs, asym_ring, "
                         "rotating_well, oscillating_well");
  spec.kind = *kind;

  const std::string model = top.string("model", "closed_form");
  if (model == "closed_form") spec.model = Model::closed_form;
  else if (model == "general") spec.model = Model::general;
  else detail::config_error("model", "closed_form or general");

  const double Bq = top.number("Bq_G_per_cm", "G/cm");
  if (!(Bq > 0.0)) detail::config_error("Bq_G_per_cm", "a positive number in G/cm");
  const double f_MHz = top.number("f_MHz", "MHz");
  if (!(f_MHz > 0.0)) detail::config_error("f_MHz", "a positive number in MHz");
  const double z0 = top.number("z0_um", "um");
  if (!(z0 > 0.0)) detail::config_error("z0_um", "a positive number in um");

  RfFieldSpec rf;
  rf.Bx = top.number("Bx_G", "G");
  rf.By = top.number("By_G", "G", 0.0);
  rf.Bz = top.number("Bz_G", "G", 0.0);
  for (const char* k : {"Bx_G", "By_G", "Bz_G"})
    if (top.has(k) && !(top.number(k, "G") >= 0.0)) detail::config_error(k, "a non-negative number in G");
  rf.alpha = top.number("alpha_rad", "rad", circular_alpha);
  rf.beta = top.number("beta_rad", "rad", 0.0);
  rf.omega = constants::two_pi * f_MHz * 1e6;

  const std::string modulation = top.string("modulation", "none");
  if (modulation == "none") {
    rf.modulation = NoModulation{};
  } else if (modulation == "linear") {
    const double w = top.number("omega_l_rad_s", "rad/s");
    if (!(w > 0.0)) detail::config_error("omega_l_rad_s", "a positive number in rad/s");
    rf.modulation = LinearModulation{w};
  } else if (modulation == "periodic") {
    const double w = top.number("omega_m_rad_s", "rad/s");
    if (!(w > 0.0)) detail::config_error("omega_m_rad_s", "a positive number in rad/s");
    rf.modulation = PeriodicModulation{w};
  } else {
    detail::config_error("modulation", "none, linear or periodic");
  }

  const double gF = top.number("gF", "dimensionless", 0.5);
  const double F = top.number("F", "hbar", 2.0);
  const double mF = top.number("mF", "hbar", 2.0);
  const double mass = top.number("mass_kg", "kg", constants::rubidium87_mass);
  try {
    spec.config.species = AtomSpecies::make(detail::twice_quantum_number("F", F),
                                            detail::twice_quantum_number("mF", mF), gF, mass);
  } catch (const Error& e) {
    if (e.code() == Errc::config) throw;
    fail(Errc::config, std::string("species: ") + e.what());
  }
  spec.config.quad = QuadrupoleField(Bq);
  spec.config.rf = rf;
  spec.config.z0 = z0;

  if (top.has("seeds_um")) {
    const json& seeds = top.raw("seeds_um");
    if (!seeds.is_array()) detail::config_error("seeds_um", "an array of [x, y] pairs in um");
    for (const json& s : seeds) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
        detail::config_error("seeds_um", "an array of [x, y] pairs in um");
      spec.seeds.push_back({s[0].get<double>(), s[1].get<double>()});
    }
  }

  if (top.has("grid")) {
    detail::KeyReader g(top.raw("grid"), "grid");
    PlaneGrid& pg = spec.grid.grid;
    pg.x_min = g.number("x_min_um", "um", pg.x_min);
    pg.x_max = g.number("x_max_um", "um", pg.x_max);
    pg.y_min = g.number("y_min_um", "um", pg.y_min);
    pg.y_max = g.number("y_max_um", "um", pg.y_max);
    pg.nx = g.integer("nx", pg.nx);
    pg.ny = g.integer("ny", pg.ny);
    spec.grid.t = g.number("t_s", "s", 0.0);
    g.finish();
  }
  try {
    spec.grid.grid.validate();
  } catch (const Error& e) {
    fail(Errc::config, std::string("grid: ") + e.what());
  }

  if (top.has("track")) {
    detail::KeyReader tr(top.raw("track"), "track");
    TrackSettings ts;
    ts.t0 = tr.number("t0_s", "s", 0.0);
    ts.t1 = tr.number("t1_s", "s");
    ts.n_steps = tr.integer("n_steps", 0);
    tr.finish();
    if (!(ts.t1 > ts.t0)) detail::config_error("track.t1_s", "a time in s later than track.t0_s");
    if (ts.n_steps != 0 && ts.n_steps < 2) detail::config_error("track.n_steps", "an integer >= 2");
    spec.track = ts;
  }

  if (top.has("simulate")) {
    detail::KeyReader sm(top.raw("simulate"), "simulate");
    SimulateSettings ss;
    ss.start.x = sm.number("x0_um", "um");
    ss.start.y = sm.number("y0_um", "um");
    ss.start.vx = sm.number("vx0_um_s", "um/s", 0.0);
    ss.start.vy = sm.number("vy0_um_s", "um/s", 0.0);
    ss.start.t = sm.number("t0_s", "s", 0.0);
    ss.duration = sm.number("duration_s", "s");
    ss.dt = sm.number("dt_s", "s");
    ss.escape_radius = sm.number("escape_radius_um", "um", ss.escape_radius);
    sm.finish();
    if (!(ss.dt > 0.0)) detail::config_error("simulate.dt_s", "a positive time step in s");
    if (!(ss.duration >= 0.0)) detail::config_error("simulate.duration_s", "a non-negative time in s");
    if (!(ss.escape_radius > 0.0)) detail::config_error("simulate.escape_radius_um", "a positive radius in um");
    spec.simulate = ss;
  }

  if (top.has("sweep")) {
    detail::KeyReader sw(top.raw("sweep"), "sweep");
    SweepSettings ss;
    ss.Bq_from = sw.number("Bq_from_G_per_cm", "G/cm", ss.Bq_from);
    ss.Bq_to = sw.number("Bq_to_G_per_cm", "G/cm", ss.Bq_to);
    ss.steps = sw.integer("steps", ss.steps);
    if (sw.has("f_MHz")) {
      const json& f = sw.raw("f_MHz");
      if (!f.is_array() || f.empty()) detail::config_error("sweep.f_MHz", "a non-empty array of frequencies in MHz");
      for (const json& v : f) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
          detail::config_error("sweep.f_MHz", "a non-empty array of positive frequencies in MHz");
        ss.f_MHz.push_back(v.get<double>());
      }
    } else {
      ss.f_MHz = {f_MHz};
    }
    sw.finish();
    if (!(ss.Bq_from > 0.0) || !(ss.Bq_to > ss.Bq_from))
      detail::config_error("sweep.Bq_to_G_per_cm", "a gradient in G/cm above sweep.Bq_from_G_per_cm > 0");
    if (ss.steps < 2) detail::config_error("sweep.steps", "an integer >= 2");
    spec.sweep = ss;
  }

  top.finish();
  spec.scenario();  // scenario constraints, reported as scenario-validation
  return spec;
}

inline RunSpec parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  json doc;
  if (first != std::string::npos && text[first] == '{') {
    doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(Errc::config, "config is not valid JSON");
  } else {
    doc = detail::parse_key_value_text(text);
  }
  return run_spec_from_json(doc);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RunSpec parse_config(const std::string& path) { return parse_config_text(read_text_file(path)); }

/// The RunSpec with every default materialized, using the config key names.
inline json resolved_json(const RunSpec& s) {
  const TrapConfiguration& c = s.config;
  json j;
  j["kind"] = std::string(to_string(s.kind));
  j["model"] = s.model == Model::closed_form ? "closed_form" : "general";
  j["Bq_G_per_cm"] = c.quad.gradient();
  j["Bx_G"] = c.rf.Bx;
  j["By_G"] = c.rf.By;
  j["Bz_G"] = c.rf.Bz;
  j["alpha_rad"] = c.rf.alpha;
  j["beta_rad"] = c.rf.beta;
  j["f_MHz"] = c.rf.omega / constants::two_pi / 1e6;
  j["z0_um"] = c.z0;
  j["gF"] = c.species.g_F();
  j["F"] = c.species.F();
  j["mF"] = c.species.m_F();
  j["mass_kg"] = c.species.mass();
  if (auto* l = std::get_if<LinearModulation>(&c.rf.modulation)) {
    j["modulation"] = "linear";
    j["omega_l_rad_s"] = l->rate;
  } else if (auto* p = std::get_if<PeriodicModulation>(&c.rf.modulation)) {
    j["modulation"] = "periodic";
    j["omega_m_rad_s"] = p->rate;
  } else {
    j["modulation"] = "none";
  }
  const PlaneGrid& g = s.grid.grid;
  j["grid"] = {{"x_min_um", g.x_min}, {"x_max_um", g.x_max}, {"y_min_um", g.y_min},
               {"y_max_um", g.y_max}, {"nx", g.nx},         {"ny", g.ny},
               {"t_s", s.grid.t}};
  if (!s.seeds.empty()) {
    j["seeds_um"] = json::array();
    for (const auto& p : s.seeds) j["seeds_um"].push_back({p[0], p[1]});
  }
  if (s.track)
    j["track"] = {{"t0_s", s.track->t0}, {"t1_s", s.track->t1}, {"n_steps", s.track->n_steps}};
  if (s.simulate) {
    const SimulateSettings& m = *s.simulate;
    j["simulate"] = {{"x0_um", m.start.x},       {"y0_um", m.start.y},   {"vx0_um_s", m.start.vx},
                     {"vy0_um_s", m.start.vy},   {"t0_s", m.start.t},    {"duration_s", m.duration},
                     {"dt_s", m.dt},             {"escape_radius_um", m.escape_radius}};
  }
  if (s.sweep)
    j["sweep"] = {{"Bq_from_G_per_cm", s.sweep->Bq_from},
                  {"Bq_to_G_per_cm", s.sweep->Bq_to},
                  {"steps", s.sweep->steps},
                  {"f_MHz", s.sweep->f_MHz}};
  return j;
}

// ---------------------------------------------------------------------------
// Writers

inline void write_grid_csv(std::ostream& out, const PotentialGrid& g) {
  out << grid_csv_header << '\n';
  const std::string t = format_number(g.time);
  for (int j = 0; j < g.grid.ny; ++j) {
    for (int i = 0; i < g.grid.nx; ++i) {
      const std::size_t k = g.grid.index(i, j);
      out << format_number(g.grid.x(i)) << ',' << format_number(g.grid.y(j)) << ',' << t << ','
          << format_number(to_h_kHz(g.values[k])) << ',' << format_number(g.delta[k]) << ','
          << format_number(g.rabi[k]) << '\n';
    }
  }
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << trajectory_csv_header << '\n';
  for (std::size_t n = 0; n < tr.states.size(); ++n) {
    const AtomState& s = tr.states[n];
    out << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.y) << ','
        << format_number(s.vx) << ',' << format_number(s.vy) << ','
        << format_number(to_h_kHz(tr.energy[n])) << '\n';
  }
}

inline json minimum_json(const MinimumRecord& m) {
  return {{"x_um", m.x},
          {"y_um", m.y},
          {"rho_um", std::hypot(m.x, m.y)},
          {"phi_min_rad", m.azimuth},
          {"V_h_kHz", to_h_kHz(m.V_over_hbar)},
          {"curvature_rad_s_per_um2", {m.curvature[0], m.curvature[1]}},
          {"classification", std::string(to_string(m.classification))}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) fail(Errc::io, "write to '" + path + "' failed");
}

}  // namespace dressed_trap
