#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nskp/dispersive.hpp"
#include "nskp/harness.hpp"
#include "nskp/solver.hpp"

namespace nskp::io {

enum class RunMode { simulate, sweep, decay, ns_ref, check };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::simulate: return "simulate";
    case RunMode::sweep: return "sweep";
    case RunMode::decay: return "decay";
    case RunMode::ns_ref: return "ns-ref";
    case RunMode::check: return "check";
  }
  return "?";
}

inline RunMode parse_mode(std::string_view s) {
  for (RunMode m : {RunMode::simulate, RunMode::sweep, RunMode::decay, RunMode::ns_ref, RunMode::check}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("mode: unknown value '" + std::string(s) + "' (simulate|sweep|decay|ns-ref|check)");
}

/// Everything one CLI invocation needs. Keys not used by the selected mode are
/// still carried (and echoed) so a config file can be shared between modes.
struct RunConfig {
  RunMode mode = RunMode::simulate;
  GridSpec grid;
  PhysParams params;
  std::uint64_t seed = 42;
  double t_final = 2.0;
  double dt = 2e-3;             // step cap
  double dt_per_lambda = 0.02;  // step <= dt_per_lambda * lambda; 0 disables
  double record_interval = 0.01;
  std::string output_dir = "nskp_out";
  // simulate: ill-prepared | well-prepared | taylor-green; ns-ref: taylor-green | random
  std::string initial = "ill-prepared";
  double band = 0.75;
  bool checkpoint = true;
  // sweep
  std::vector<double> lambdas{0.2, 0.1, 0.05, 0.025};
  int threads = 0;
  bool well_prepared = false;
  double s0 = 1.5;
  double ns_viscosity = 0.5;
  // decay
  WaveEquation equation = WaveEquation::kg;
  double packet_width = 1.2;
  double t_start = 2.0;
  double t_end = 12.0;
  int samples = 41;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  Grid make_grid() const { return grid.make(); }

  /// Step actually used for a given lambda: the record interval split evenly
  /// into steps no larger than min(dt, dt_per_lambda * lambda).
  double step_for(double lambda) const { return default_dt(lambda, record_interval, dt, dt_per_lambda); }

  SweepConfig sweep_config() const {
    SweepConfig c;
    c.lambdas = lambdas;
    c.seed = seed;
    c.grid = grid;
    c.t_final = t_final;
    c.dt = dt;
    c.dt_per_lambda = dt_per_lambda;
    c.record_interval = record_interval;
    c.ns_viscosity = ns_viscosity;
    c.params = params;
    c.data.band = band;
    c.well_prepared = well_prepared;
    c.s0 = s0;
    c.threads = threads;
    return c;
  }

  std::vector<double> sample_times() const {
    std::vector<double> t(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_start + (t_end - t_start) * i / (samples - 1);
    return t;
  }
};

/// Defaults for a mode before any file or flag is applied.
inline RunConfig defaults_for(RunMode m) {
  RunConfig c;
  c.mode = m;
  switch (m) {
    case RunMode::simulate:
    case RunMode::check:
      break;
    case RunMode::sweep:
      c.t_final = 1.0;
      break;
    case RunMode::decay:
      c.grid = {3, 96, 2.0 * std::numbers::pi * 16.0};
      break;
    case RunMode::ns_ref:
      c.grid = {2, 64, 2.0 * std::numbers::pi};
      c.t_final = 1.0;
      c.dt = 1e-2;
      c.initial = "taylor-green";
      c.ns_viscosity = 1.0;
      break;
  }
  return c;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view key, std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(s) + "'");
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Key {
  const char* name;
  const char* help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

inline Key real(const char* name, const char* help, double RunConfig::*field) {
  return {name, help, [field](const RunConfig& c) { return format_double(c.*field); },
          [field, name](RunConfig& c, std::string_view v) { c.*field = parse_double(name, v); }};
}

inline Key real_param(const char* name, const char* help, double PhysParams::*field) {
  return {name, help, [field](const RunConfig& c) { return format_double(c.params.*field); },
          [field, name](RunConfig& c, std::string_view v) { c.params.*field = parse_double(name, v); }};
}

inline Key flag(const char* name, const char* help, bool RunConfig::*field) {
  return {name, help, [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); },
          [field, name](RunConfig& c, std::string_view v) { c.*field = parse_bool(name, v); }};
}

inline Key text(const char* name, const char* help, std::string RunConfig::*field) {
  return {name, help, [field](const RunConfig& c) { return c.*field; },
          [field](RunConfig& c, std::string_view v) { c.*field = std::string(v); }};
}

}  // namespace detail

/// The documented flat schema, in echo order.
inline const std::vector<detail::Key>& config_keys() {
  using namespace detail;
  static const std::vector<Key> keys = {
      {"mode", "simulate|sweep|decay|ns-ref|check", [](const RunConfig& c) { return std::string(to_string(c.mode)); },
       [](RunConfig& c, std::string_view v) { c.mode = parse_mode(v); }},
      {"dim", "spatial dimension (2 or 3)", [](const RunConfig& c) { return std::to_string(c.grid.dim); },
       [](RunConfig& c, std::string_view v) { c.grid.dim = parse_int<int>("dim", v); }},
      {"n", "points per axis", [](const RunConfig& c) { return std::to_string(c.grid.n); },
       [](RunConfig& c, std::string_view v) { c.grid.n = parse_int<int>("n", v); }},
      {"box_length", "periodic box side", [](const RunConfig& c) { return format_double(c.grid.box_length); },
       [](RunConfig& c, std::string_view v) { c.grid.box_length = parse_double("box_length", v); }},
      real_param("lambda", "Debye length", &PhysParams::lambda),
      real_param("gamma", "pressure exponent (>= 3/2)", &PhysParams::gamma),
      real_param("mu", "viscosity", &PhysParams::mu),
      real_param("kappa", "capillarity", &PhysParams::kappa),
      real_param("rho_floor", "vacuum floor", &PhysParams::rho_floor),
      {"seed", "random seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); }},
      real("t_final", "final time", &RunConfig::t_final),
      real("dt", "largest time step", &RunConfig::dt),
      real("dt_per_lambda", "step bound per unit lambda (0 disables)", &RunConfig::dt_per_lambda),
      real("record_interval", "time between records", &RunConfig::record_interval),
      text("output_dir", "output directory", &RunConfig::output_dir),
      text("initial", "initial data", &RunConfig::initial),
      real("band", "largest wavenumber of random data", &RunConfig::band),
      flag("checkpoint", "write the final state", &RunConfig::checkpoint),
      {"lambdas", "sweep values, comma separated, decreasing",
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.lambdas.size(); ++i) s += (i ? "," : "") + format_double(c.lambdas[i]);
         return s;
       },
       [](RunConfig& c, std::string_view v) {
         c.lambdas.clear();
         while (!v.empty()) {
           const auto cut = v.find(',');
           c.lambdas.push_back(parse_double("lambdas", trim(v.substr(0, cut))));
           if (cut == std::string_view::npos) break;
           v.remove_prefix(cut + 1);
         }
       }},
      {"threads", "sweep workers (0: one per lambda)", [](const RunConfig& c) { return std::to_string(c.threads); },
       [](RunConfig& c, std::string_view v) { c.threads = parse_int<int>("threads", v); }},
      flag("well_prepared", "sweep with well-prepared data", &RunConfig::well_prepared),
      real("s0", "Sobolev index of the mixed norm", &RunConfig::s0),
      real("ns_viscosity", "reference Navier-Stokes viscosity", &RunConfig::ns_viscosity),
      {"equation", "kg|beam", [](const RunConfig& c) { return std::string(to_string(c.equation)); },
       [](RunConfig& c, std::string_view v) {
         if (v == "kg") c.equation = WaveEquation::kg;
         else if (v == "beam") c.equation = WaveEquation::beam;
         else throw ConfigError("equation: expected kg or beam, got '" + std::string(v) + "'");
       }},
      real("packet_width", "Gaussian packet width", &RunConfig::packet_width),
      real("t_start", "first decay sample", &RunConfig::t_start),
      real("t_end", "last decay sample", &RunConfig::t_end),
      {"samples", "number of decay samples", [](const RunConfig& c) { return std::to_string(c.samples); },
       [](RunConfig& c, std::string_view v) { c.samples = parse_int<int>("samples", v); }},
  };
  return keys;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline const detail::Key& find_key(std::string_view name) {
  const auto& keys = config_keys();
  for (const auto& k : keys) {
    if (name == k.name) return k;
  }
  const auto best = std::min_element(keys.begin(), keys.end(), [&](const auto& x, const auto& y) {
    return edit_distance(name, x.name) < edit_distance(name, y.name);
  });
  throw ConfigError("unknown key '" + std::string(name) + "' (nearest valid key: '" + best->name + "')");
}

/// Check the invariants the selected mode relies on. Errors name the field.
inline void validate(const RunConfig& c) {
  auto bad = [](const std::string& what) { throw ConfigError(what); };
  try {
    c.params.validate();
    c.grid.make();
  } catch (const ContractViolation& e) {
    bad(e.what());
  }
  if (!(c.t_final > 0.0)) bad("t_final must be > 0");
  if (!(c.dt > 0.0)) bad("dt must be > 0");
  if (!(c.dt_per_lambda >= 0.0)) bad("dt_per_lambda must be >= 0");
  if (!(c.record_interval > 0.0)) bad("record_interval must be > 0");
  if (c.output_dir.empty()) bad("output_dir must not be empty");
  if (c.output_dir.find_first_of("#\r\n") != std::string::npos) bad("output_dir must not contain '#' or line breaks");
  if (!(c.band > 0.0)) bad("band must be > 0");
  auto horizon = [&](double dt) {
    try {
      whole_steps(c.t_final, c.record_interval, "t_final");
      whole_steps(c.record_interval, dt, "record_interval");
    } catch (const ContractViolation& e) {
      bad(e.what());
    }
  };
  switch (c.mode) {
    case RunMode::simulate:
      if (c.initial != "ill-prepared" && c.initial != "well-prepared" && c.initial != "taylor-green") {
        bad("initial: expected ill-prepared, well-prepared or taylor-green for simulate");
      }
      horizon(c.step_for(c.params.lambda));
      break;
    case RunMode::sweep:
      try {
        c.sweep_config().validate();
      } catch (const ContractViolation& e) {
        bad(e.what());
      }
      if (c.threads < 0) bad("threads must be >= 0");
      for (double l : c.lambdas) horizon(c.step_for(l));
      break;
    case RunMode::decay:
      if (c.grid.dim != 3) bad("dim must be 3 for decay");
      if (!(c.packet_width > 0.0)) bad("packet_width must be > 0");
      if (!(c.t_start >= 0.0 && c.t_end > c.t_start)) bad("need 0 <= t_start < t_end");
      if (c.samples < 3) bad("samples must be >= 3");
      break;
    case RunMode::ns_ref:
      if (c.grid.dim != 2 && c.initial == "taylor-green") bad("initial=taylor-green needs dim 2");
      if (c.initial != "taylor-green" && c.initial != "random") bad("initial: expected taylor-green or random for ns-ref");
      if (!(c.ns_viscosity >= 0.0)) bad("ns_viscosity must be >= 0");
      horizon(c.dt);
      break;
    case RunMode::check:
      break;
  }
}

/// Parse a flat `key = value` document. `#` starts a comment. Precedence, low
/// to high: mode defaults, the document, `env_output_dir`, then `overrides`
/// (command-line flags). The mode itself is looked up first so that its
/// defaults apply.
inline RunConfig parse_config(std::string_view document,
                              const std::map<std::string, std::string>& overrides = {},
                              const std::optional<std::string>& env_output_dir = std::nullopt) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(document)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(detail::trim(v.substr(0, eq)));
    find_key(key);
    for (const auto& e : entries) {
      if (e.first == key) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    entries.emplace_back(key, std::string(detail::trim(v.substr(eq + 1))));
  }
  for (const auto& [k, v] : overrides) find_key(k);

  RunMode mode = RunMode::simulate;
  for (const auto& [k, v] : entries) {
    if (k == "mode") mode = parse_mode(v);
  }
  if (const auto it = overrides.find("mode"); it != overrides.end()) mode = parse_mode(it->second);

  RunConfig c = defaults_for(mode);
  for (const auto& [k, v] : entries) find_key(k).set(c, v);
  if (env_output_dir && !env_output_dir->empty()) c.output_dir = *env_output_dir;
  for (const auto& [k, v] : overrides) find_key(k).set(c, v);
  c.mode = mode;
  validate(c);
  return c;
}

/// Every key with its materialized value; parse_config reads it back unchanged.
inline std::string emit_config(const RunConfig& c) {
  std::string out;
  for (const auto& k : config_keys()) out += std::string(k.name) + " = " + k.get(c) + "\n";
  return out;
}

}  // namespace nskp::io
